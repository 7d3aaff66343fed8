use num_complex::Complex64;

use crate::geom::Point;
use crate::poly2::{multi_indices, slot_count, TruncatedPoly2};

/// Scaled derivatives `c[i][j] = d^i d^j f(anchor) / (i! j!)` of a function
/// for `i + j <= order`, stored in slot order (see [`crate::poly2`]).
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorTable {
    anchor: Point,
    coeffs: TruncatedPoly2,
}

impl TaylorTable {
    pub fn new(anchor: Point, coeffs: TruncatedPoly2) -> Self {
        Self { anchor, coeffs }
    }

    pub fn zero(anchor: Point, order: usize) -> Self {
        Self::new(anchor, TruncatedPoly2::zero(order))
    }

    pub fn anchor(&self) -> Point {
        self.anchor
    }

    pub fn order(&self) -> usize {
        self.coeffs.cap()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs.get(i, j)
    }

    /// Entries in slot order; there are `(n + 1)(n + 2) / 2` of them.
    pub fn entries(&self) -> &[Complex64] {
        self.coeffs.coeffs()
    }

    pub fn as_poly(&self) -> &TruncatedPoly2 {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        slot_count(self.order())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn norm(&self) -> f64 {
        self.entries().iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Taylor coefficients `t` of `exp(P)` with `P(0) = 0` (up to `exp(P(0))`),
/// solved degree by degree from `(i + 1) t[i+1][j] = sum P_x[c][d] t[i-c][j-d]`
/// and, on the `i = 0` column, the analogous identity in `y`.
pub(crate) fn exp_series(
    anchor: Point,
    phase_dx: &TruncatedPoly2,
    phase_dy: &TruncatedPoly2,
    order: usize,
) -> TaylorTable {
    let mut t = TruncatedPoly2::zero(order);
    t.set(0, 0, Complex64::new(1.0, 0.0));
    for (i, j) in multi_indices(order).skip(1) {
        let mut acc = Complex64::new(0.0, 0.0);
        if i > 0 {
            let a = i - 1;
            for c in 0..=a {
                for d in 0..=j {
                    acc += phase_dx.get(c, d) * t.get(a - c, j - d);
                }
            }
            acc /= i as f64;
        } else {
            let b = j - 1;
            for d in 0..=b {
                acc += phase_dy.get(0, d) * t.get(0, b - d);
            }
            acc /= j as f64;
        }
        t.set(i, j, acc);
    }
    TaylorTable::new(anchor, t)
}
