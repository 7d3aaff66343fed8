//! Generalized plane waves `phi = exp(P)`.
//!
//! The phase `P` is a complex polynomial of degree `q + 1` in the local
//! coordinates `(x - x_G, y - y_G)`. Its linear part is `N (cos t, sin t)`,
//! the constant term and every other coefficient `lambda[i][j]` with
//! `i in {0, 1}` vanish, and the remaining coefficients `lambda[i + 2][j]`
//! are fixed by requiring that the Taylor expansion of `beta - P_Delta` at the
//! anchor vanishes up to total degree `q - 1`. Each such equation contains a
//! single new unknown, so the coefficients follow from an explicit recursion.

mod fdb;
mod field;
mod record;
mod taylor;

pub use fdb::{bivariate_faa_di_bruno, partitions, Partition, FDB_MAX_ORDER};
pub use field::CoefficientField;
pub use taylor::TaylorTable;

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{GpwError, Result};
use crate::geom::Point;
use crate::poly2::{Axis, TruncatedPoly2};

/// |beta(G)| below which the beta-normalization is rejected.
pub const ZERO_WAVENUMBER_TOL: f64 = 1e-14;

/// How the linear coefficient `N` of the phase is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// `N = sqrt(beta(G))`, principal branch.
    BetaLocal,
    /// `N = i`, independent of the anchor.
    ConstantI,
    /// Any nonzero `N`.
    Custom(Complex64),
}

impl Normalization {
    /// The value of `N` at anchor `g`.
    pub fn resolve(&self, field: &dyn CoefficientField, g: Point) -> Result<Complex64> {
        let n = match *self {
            Normalization::BetaLocal => {
                let beta = field.value(g);
                if beta.norm() < ZERO_WAVENUMBER_TOL {
                    return Err(GpwError::ZeroLocalWavenumber { x: g.x, y: g.y });
                }
                principal_sqrt(beta)
            }
            Normalization::ConstantI => Complex64::new(0.0, 1.0),
            Normalization::Custom(n) => n,
        };
        if n == Complex64::new(0.0, 0.0) {
            return Err(GpwError::ZeroN);
        }
        Ok(n)
    }

    /// Short name used in CSV output: `beta`, `const` or `custom`.
    pub fn label(&self) -> &'static str {
        match self {
            Normalization::BetaLocal => "beta",
            Normalization::ConstantI => "const",
            Normalization::Custom(_) => "custom",
        }
    }
}

/// Principal square root, treating a real argument's signed zero imaginary
/// part as `+0` so negative reals map to the positive imaginary axis.
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

/// One generalized plane wave.
#[derive(Debug, Clone, PartialEq)]
pub struct Gpw {
    anchor: Point,
    n: Complex64,
    theta: f64,
    q: usize,
    phase: TruncatedPoly2,
    phase_dx: TruncatedPoly2,
    phase_dy: TruncatedPoly2,
    p_delta: TruncatedPoly2,
}

impl Gpw {
    /// Assembles a wave from an already computed phase.
    pub fn from_phase(anchor: Point, n: Complex64, theta: f64, q: usize, phase: TruncatedPoly2) -> Self {
        let phase_dx = phase.partial(Axis::X);
        let phase_dy = phase.partial(Axis::Y);
        let p_delta = phase.p_delta();
        Self {
            anchor,
            n,
            theta,
            q,
            phase,
            phase_dx,
            phase_dy,
            p_delta,
        }
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    pub fn n(&self) -> Complex64 {
        self.n
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// The phase polynomial `P` in local coordinates.
    pub fn phase(&self) -> &TruncatedPoly2 {
        &self.phase
    }

    /// Coefficient `lambda[i][j]` of the phase.
    pub fn lambda(&self, i: usize, j: usize) -> Complex64 {
        self.phase.get(i, j)
    }

    pub fn p_delta(&self) -> &TruncatedPoly2 {
        &self.p_delta
    }

    /// `phi(m)`.
    pub fn eval(&self, m: Point) -> Complex64 {
        let d = m - self.anchor;
        self.phase.evaluate(d.x, d.y).exp()
    }

    /// `grad phi(m)`.
    pub fn eval_grad(&self, m: Point) -> [Complex64; 2] {
        self.eval_with_grad(m).1
    }

    /// `phi(m)` and its gradient together.
    pub fn eval_with_grad(&self, m: Point) -> (Complex64, [Complex64; 2]) {
        let d = m - self.anchor;
        let phi = self.phase.evaluate(d.x, d.y).exp();
        let gx = self.phase_dx.evaluate(d.x, d.y) * phi;
        let gy = self.phase_dy.evaluate(d.x, d.y) * phi;
        (phi, [gx, gy])
    }

    /// `beta(m) - P_Delta(m - G)`, i.e. `((-Laplacian + beta) phi / phi)(m)`.
    pub fn residual(&self, field: &dyn CoefficientField, m: Point) -> Complex64 {
        let d = m - self.anchor;
        field.value(m) - self.p_delta.evaluate(d.x, d.y)
    }

    /// Taylor coefficients of `beta - P_Delta` at the anchor up to total
    /// degree `q - 1`; all of them vanish for a correctly designed wave.
    pub fn design_defect(&self, field: &dyn CoefficientField) -> TruncatedPoly2 {
        let order = self.q - 1;
        &field.taylor(self.anchor, order) - &self.p_delta.with_cap(order)
    }

    /// Taylor table of `phi` at the anchor, from the series identity
    /// `phi_x = P_x phi` (and the same in `y`).
    pub fn taylor_table_exp(&self, order: usize) -> TaylorTable {
        taylor::exp_series(self.anchor, &self.phase_dx, &self.phase_dy, order)
    }

    /// Same contract as [`Gpw::taylor_table_exp`], by explicit enumeration of
    /// bivariate integer partitions. Only meant as a cross-check.
    pub fn taylor_table_fdb(&self, order: usize) -> Result<TaylorTable> {
        if order > FDB_MAX_ORDER {
            return Err(GpwError::OrderTooLarge {
                requested: order,
                limit: FDB_MAX_ORDER,
            });
        }
        let mut table = TruncatedPoly2::zero(order);
        let lambda00 = self.phase.get(0, 0);
        for (i, j) in crate::poly2::multi_indices(order) {
            let outer = vec![lambda00.exp(); i + j + 1];
            table.set(i, j, bivariate_faa_di_bruno(&outer, &self.phase, i, j));
        }
        Ok(TaylorTable::new(self.anchor, table))
    }
}

/// Designs one wave of approximation order `q` and direction `theta`.
pub fn design_gpw(
    field: &dyn CoefficientField,
    anchor: Point,
    q: usize,
    theta: f64,
    norm: Normalization,
) -> Result<Gpw> {
    if q == 0 {
        return Err(GpwError::InvalidArgument("approximation order q must be >= 1".into()));
    }
    if let Some(supported) = field.max_order() {
        if supported < q - 1 {
            return Err(GpwError::UnsupportedDerivativeOrder {
                requested: q - 1,
                supported,
            });
        }
    }
    let n = norm.resolve(field, anchor)?;
    let beta = field.taylor(anchor, q - 1);

    let mut phase = TruncatedPoly2::zero(q + 1);
    phase.set(1, 0, n * theta.cos());
    phase.set(0, 1, n * theta.sin());

    // lambda[i+2][j] needs lambda[k][l] for k <= i + 1 only: sweep i upward.
    for i in 0..q {
        for j in 0..q - i {
            let lam = |a: usize, b: usize| phase.get(a, b);
            let mut rhs = beta.get(i, j) - lam(i, j + 2) * ((j + 2) * (j + 1)) as f64;
            for k in 0..=i {
                for l in 0..=j {
                    rhs -= lam(i - k + 1, j - l) * lam(k + 1, l) * ((i - k + 1) * (k + 1)) as f64;
                }
            }
            for k in 0..=j {
                for l in 0..=i {
                    rhs -= lam(i - l, j - k + 1) * lam(l, k + 1) * ((j - k + 1) * (k + 1)) as f64;
                }
            }
            let value = rhs / ((i + 2) * (i + 1)) as f64;
            phase.set(i + 2, j, value);
        }
    }
    Ok(Gpw::from_phase(anchor, n, theta, q, phase))
}

/// Direction of member `l` (zero based) of a `p`-element basis.
pub fn basis_direction(l: usize, p: usize) -> f64 {
    2.0 * PI * l as f64 / p as f64
}

/// The `p` waves at anchor `g` with equi-spaced directions `2 pi l / p`.
pub fn basis_set(
    field: &dyn CoefficientField,
    anchor: Point,
    q: usize,
    p: usize,
    norm: Normalization,
) -> Result<Vec<Gpw>> {
    if p < 3 {
        return Err(GpwError::InvalidArgument(format!(
            "a basis needs at least 3 directions, got {p}"
        )));
    }
    (0..p)
        .map(|l| design_gpw(field, anchor, q, basis_direction(l, p), norm))
        .collect()
}
