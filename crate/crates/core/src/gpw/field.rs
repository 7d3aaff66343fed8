use num_complex::Complex64;

use crate::geom::Point;
use crate::poly2::{multi_indices, TruncatedPoly2};
use crate::factorial;

/// The coefficient `beta` of `-Laplacian u + beta u = 0`, exposed through its
/// partial derivatives at a point.
pub trait CoefficientField: Send + Sync {
    /// `d^i/dx^i d^j/dy^j beta` at `at`.
    fn derivative(&self, at: Point, i: usize, j: usize) -> Complex64;

    /// Highest total derivative order the oracle supports; `None` means any.
    fn max_order(&self) -> Option<usize> {
        None
    }

    /// Vertical lines `x = c` across which the field is only piecewise smooth.
    fn breaklines_x(&self) -> Vec<f64> {
        Vec::new()
    }

    /// Short identifier used in CSV headers and records.
    fn label(&self) -> String;

    fn value(&self, at: Point) -> Complex64 {
        self.derivative(at, 0, 0)
    }

    /// Scaled derivatives `d^i d^j beta / (i! j!)` for `i + j <= order`.
    fn taylor(&self, at: Point, order: usize) -> TruncatedPoly2 {
        let mut t = TruncatedPoly2::zero(order);
        for (i, j) in multi_indices(order) {
            t.set(i, j, self.derivative(at, i, j) / (factorial(i) * factorial(j)));
        }
        t
    }
}

impl<F: CoefficientField + ?Sized> CoefficientField for &F {
    fn derivative(&self, at: Point, i: usize, j: usize) -> Complex64 {
        (**self).derivative(at, i, j)
    }
    fn max_order(&self) -> Option<usize> {
        (**self).max_order()
    }
    fn breaklines_x(&self) -> Vec<f64> {
        (**self).breaklines_x()
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

impl<F: CoefficientField + ?Sized> CoefficientField for Box<F> {
    fn derivative(&self, at: Point, i: usize, j: usize) -> Complex64 {
        (**self).derivative(at, i, j)
    }
    fn max_order(&self) -> Option<usize> {
        (**self).max_order()
    }
    fn breaklines_x(&self) -> Vec<f64> {
        (**self).breaklines_x()
    }
    fn label(&self) -> String {
        (**self).label()
    }
}
