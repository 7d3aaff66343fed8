//! Reference solutions and built-in coefficient fields.

mod airy;

pub use airy::{
    airy_ai, airy_bi, airy_derivatives, AIRY_MAX_DERIVATIVE, AIRY_RANGE, AI_0, AI_PRIME_0, BI_0,
    BI_PRIME_0,
};

use num_complex::Complex64;

use crate::error::Result;
use crate::factorial;
use crate::geom::Point;
use crate::gpw::{CoefficientField, Gpw, TaylorTable};
use crate::poly2::{multi_indices, TruncatedPoly2};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `beta(x, y) = a x + b y + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineField {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CoefficientField for AffineField {
    fn derivative(&self, at: Point, i: usize, j: usize) -> Complex64 {
        let v = match (i, j) {
            (0, 0) => self.a * at.x + self.b * at.y + self.c,
            (1, 0) => self.a,
            (0, 1) => self.b,
            _ => 0.0,
        };
        Complex64::new(v, 0.0)
    }

    fn label(&self) -> String {
        if (self.a, self.b, self.c) == (1.0, 0.0, -1.0) {
            "affine".into()
        } else {
            format!("affine:{}:{}:{}", self.a, self.b, self.c)
        }
    }
}

/// Constant coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantField(pub f64);

impl CoefficientField for ConstantField {
    fn derivative(&self, _: Point, i: usize, j: usize) -> Complex64 {
        if i + j == 0 {
            Complex64::new(self.0, 0.0)
        } else {
            ZERO
        }
    }

    fn label(&self) -> String {
        format!("constant:{}", self.0)
    }
}

/// `beta = -kappa^2` for `x < 2` and `-kappa^2 (x - 4) / 2` for `x >= 2`,
/// vanishing at `x = 4`. The two pieces do not meet at `x = 2` (the left
/// limit is `-kappa^2`, the right value `kappa^2`). Derivatives are those of
/// the piece containing the point, the right piece on the breakline itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    pub kappa: f64,
}

impl CutoffProfile {
    pub const BREAKLINE: f64 = 2.0;
}

impl CoefficientField for CutoffProfile {
    fn derivative(&self, at: Point, i: usize, j: usize) -> Complex64 {
        let k2 = self.kappa * self.kappa;
        let v = if at.x < Self::BREAKLINE {
            if i + j == 0 {
                -k2
            } else {
                0.0
            }
        } else {
            match (i, j) {
                (0, 0) => -k2 * (at.x - 4.0) / 2.0,
                (1, 0) => -k2 / 2.0,
                _ => 0.0,
            }
        };
        Complex64::new(v, 0.0)
    }

    fn breaklines_x(&self) -> Vec<f64> {
        vec![Self::BREAKLINE]
    }

    fn label(&self) -> String {
        format!("cutoff:{}", self.kappa)
    }
}

/// `beta(x, y) = x - 1`.
pub fn field_affine() -> AffineField {
    AffineField { a: 1.0, b: 0.0, c: -1.0 }
}

pub fn field_constant(c: f64) -> ConstantField {
    ConstantField(c)
}

pub fn field_cutoff_profile(kappa: f64) -> CutoffProfile {
    CutoffProfile { kappa }
}

/// A function with known values, gradients and Taylor tables, used as the
/// target of interpolation studies and as boundary data.
pub trait AnalyticSolution: Send + Sync {
    fn id(&self) -> String;

    fn value(&self, m: Point) -> Result<Complex64>;

    fn gradient(&self, m: Point) -> Result<[Complex64; 2]>;

    /// Scaled derivatives at `at` up to total order `order`.
    fn taylor(&self, at: Point, order: usize) -> Result<TaylorTable>;
}

/// `u(x, y) = Ai(x) exp(i y)`, an exact solution of
/// `-Laplacian u + (x - 1) u = 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AiryPlaneSolution;

impl AiryPlaneSolution {
    /// `d^i/dx^i d^j/dy^j u = Ai^(i)(x) i^j exp(i y)`.
    pub fn derivative(&self, m: Point, i: usize, j: usize) -> Result<Complex64> {
        let ai = airy_derivatives(m.x, i)?[i];
        Ok(I.powu(j as u32) * (I * m.y).exp() * ai)
    }
}

impl AnalyticSolution for AiryPlaneSolution {
    fn id(&self) -> String {
        "airy".into()
    }

    fn value(&self, m: Point) -> Result<Complex64> {
        let (ai, _) = airy_ai(m.x)?;
        Ok((I * m.y).exp() * ai)
    }

    fn gradient(&self, m: Point) -> Result<[Complex64; 2]> {
        let (ai, aip) = airy_ai(m.x)?;
        let e = (I * m.y).exp();
        Ok([e * aip, I * e * ai])
    }

    fn taylor(&self, at: Point, order: usize) -> Result<TaylorTable> {
        let d = airy_derivatives(at.x, order)?;
        let e = (I * at.y).exp();
        let mut t = TruncatedPoly2::zero(order);
        for (i, j) in multi_indices(order) {
            t.set(i, j, I.powu(j as u32) * e * d[i] / (factorial(i) * factorial(j)));
        }
        Ok(TaylorTable::new(at, t))
    }
}

pub fn airy_plane_solution() -> AiryPlaneSolution {
    AiryPlaneSolution
}

/// The zero function.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroSolution;

impl AnalyticSolution for ZeroSolution {
    fn id(&self) -> String {
        "zero".into()
    }
    fn value(&self, _: Point) -> Result<Complex64> {
        Ok(ZERO)
    }
    fn gradient(&self, _: Point) -> Result<[Complex64; 2]> {
        Ok([ZERO; 2])
    }
    fn taylor(&self, at: Point, order: usize) -> Result<TaylorTable> {
        Ok(TaylorTable::zero(at, order))
    }
}

/// A single wave seen as a target function. Taylor tables are only
/// available at its own anchor.
#[derive(Debug, Clone)]
pub struct WaveSolution(pub Gpw);

impl AnalyticSolution for WaveSolution {
    fn id(&self) -> String {
        "wave".into()
    }
    fn value(&self, m: Point) -> Result<Complex64> {
        Ok(self.0.eval(m))
    }
    fn gradient(&self, m: Point) -> Result<[Complex64; 2]> {
        Ok(self.0.eval_grad(m))
    }
    fn taylor(&self, at: Point, order: usize) -> Result<TaylorTable> {
        if at != self.0.anchor() {
            return Err(crate::error::GpwError::MixedAnchors);
        }
        Ok(self.0.taylor_table_exp(order))
    }
}
