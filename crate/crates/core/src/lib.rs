//! Generalized plane waves for `-Laplacian u + beta u = 0`.
//!
//! A generalized plane wave is `phi = exp(P)` with `P` a bivariate complex
//! polynomial chosen so that `(-Laplacian + beta) phi` vanishes to a given
//! order at an anchor point. The crate designs such functions ([`gpw`]),
//! studies their local interpolation properties ([`interp`]) and uses them
//! as a Trefftz basis in an ultra weak variational solver ([`uwvf`]).
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod cli;
pub mod error;
pub mod geom;
pub mod gpw;
pub mod interp;
pub mod linalg;
pub mod poly2;
pub mod special;
pub mod uwvf;

pub use error::{GpwError, Result};
pub use geom::Point;
pub use gpw::{basis_set, design_gpw, CoefficientField, Gpw, Normalization, TaylorTable};
pub use poly2::TruncatedPoly2;

/// `n!` as a float; exact for `n <= 22`.
pub fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
