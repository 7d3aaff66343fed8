//! Truncated bivariate complex polynomials.
//!
//! A [`TruncatedPoly2`] stores the coefficients `c[i][j]` of
//! `sum c[i][j] dx^i dy^j` for all `i + j <= cap` in a dense triangular
//! array. Slots are ordered by total degree ascending and, within one degree
//! `d`, by the power of `x` descending, so `(i, j)` lives at
//! `d (d + 1) / 2 + j`. The same numbering is used for the rows of the Taylor
//! fit matrices in [`crate::interp`].

use num_complex::Complex64;
use std::ops::{Add, Neg, Sub};

/// Direction of a partial derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Number of slots for total degree `<= cap`.
#[inline]
pub const fn slot_count(cap: usize) -> usize {
    (cap + 1) * (cap + 2) / 2
}

/// Slot of the multi-index `(i, j)`.
#[inline]
pub const fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// Inverse of [`slot`].
pub fn multi_index(slot: usize) -> (usize, usize) {
    let mut d = 0;
    while slot_count(d) <= slot {
        d += 1;
    }
    let j = slot - d * (d + 1) / 2;
    (d - j, j)
}

/// Iterates over every `(i, j)` with `i + j <= cap` in slot order.
pub fn multi_indices(cap: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=cap).flat_map(|d| (0..=d).map(move |j| (d - j, j)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedPoly2 {
    cap: usize,
    coeffs: Vec<Complex64>,
}

impl TruncatedPoly2 {
    pub fn zero(cap: usize) -> Self {
        Self {
            cap,
            coeffs: vec![Complex64::new(0.0, 0.0); slot_count(cap)],
        }
    }

    pub fn constant(cap: usize, c: Complex64) -> Self {
        let mut p = Self::zero(cap);
        p.coeffs[0] = c;
        p
    }

    /// Builds a polynomial from `(i, j, coefficient)` terms; terms above `cap`
    /// are dropped.
    pub fn from_terms(cap: usize, terms: &[(usize, usize, Complex64)]) -> Self {
        let mut p = Self::zero(cap);
        for &(i, j, c) in terms {
            if i + j <= cap {
                p.coeffs[slot(i, j)] += c;
            }
        }
        p
    }

    /// Wraps a coefficient vector laid out in slot order.
    pub fn from_slots(cap: usize, coeffs: Vec<Complex64>) -> Option<Self> {
        (coeffs.len() == slot_count(cap)).then_some(Self { cap, coeffs })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `dx^i dy^j`, zero above the cap.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i + j <= self.cap {
            self.coeffs[slot(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// # Panics
    /// If `i + j` exceeds the cap.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        assert!(i + j <= self.cap, "({i}, {j}) above cap {}", self.cap);
        self.coeffs[slot(i, j)] = value;
    }

    /// Highest total degree carrying a nonzero coefficient (0 for the zero
    /// polynomial).
    pub fn degree(&self) -> usize {
        multi_indices(self.cap)
            .filter(|&(i, j)| self.get(i, j) != Complex64::new(0.0, 0.0))
            .map(|(i, j)| i + j)
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Copy with a different cap, padding with zeros or dropping high terms.
    pub fn with_cap(&self, cap: usize) -> Self {
        let mut p = Self::zero(cap);
        for (i, j) in multi_indices(cap.min(self.cap)) {
            p.coeffs[slot(i, j)] = self.coeffs[slot(i, j)];
        }
        p
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            cap: self.cap,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// Product keeping only terms of total degree `<= cap`.
    pub fn mul_truncated(&self, other: &Self, cap: usize) -> Self {
        let mut out = Self::zero(cap);
        for (i1, j1) in multi_indices(self.cap.min(cap)) {
            let a = self.coeffs[slot(i1, j1)];
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let room = cap - (i1 + j1);
            for (i2, j2) in multi_indices(other.cap.min(room)) {
                out.coeffs[slot(i1 + i2, j1 + j2)] += a * other.coeffs[slot(i2, j2)];
            }
        }
        out
    }

    /// Formal partial derivative; the cap drops by one (floored at zero).
    pub fn partial(&self, axis: Axis) -> Self {
        let cap = self.cap.saturating_sub(1);
        let mut out = Self::zero(cap);
        if self.cap == 0 {
            return out;
        }
        for (i, j) in multi_indices(cap) {
            out.coeffs[slot(i, j)] = match axis {
                Axis::X => self.get(i + 1, j) * (i + 1) as f64,
                Axis::Y => self.get(i, j + 1) * (j + 1) as f64,
            };
        }
        out
    }

    /// Evaluates at the offset `(dx, dy)`, accumulating degree by degree.
    pub fn evaluate(&self, dx: f64, dy: f64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        // row holds dx^(d-j) dy^j for the current degree d
        let mut row = vec![1.0_f64];
        for d in 0..=self.cap {
            if d > 0 {
                let mut next = Vec::with_capacity(d + 1);
                next.extend(row.iter().map(|v| v * dx));
                next.push(row[d - 1] * dy);
                row = next;
            }
            let base = d * (d + 1) / 2;
            let mut layer = Complex64::new(0.0, 0.0);
            for (j, m) in row.iter().enumerate() {
                layer += self.coeffs[base + j] * *m;
            }
            total += layer;
        }
        total
    }

    /// `(Laplacian e^P) / e^P = P_xx + P_x^2 + P_yy + P_y^2`, computed without
    /// truncation (cap `2 (deg P - 1)`).
    pub fn p_delta(&self) -> Self {
        let deg = self.degree().max(1);
        let cap = 2 * (deg - 1);
        let px = self.partial(Axis::X);
        let py = self.partial(Axis::Y);
        let pxx = px.partial(Axis::X).with_cap(cap);
        let pyy = py.partial(Axis::Y).with_cap(cap);
        &(&pxx + &px.mul_truncated(&px, cap)) + &(&pyy + &py.mul_truncated(&py, cap))
    }
}

impl Add for &TruncatedPoly2 {
    type Output = TruncatedPoly2;

    fn add(self, rhs: Self) -> TruncatedPoly2 {
        let cap = self.cap.max(rhs.cap);
        let mut out = self.with_cap(cap);
        for (i, j) in multi_indices(rhs.cap) {
            out.coeffs[slot(i, j)] += rhs.coeffs[slot(i, j)];
        }
        out
    }
}

impl Sub for &TruncatedPoly2 {
    type Output = TruncatedPoly2;

    fn sub(self, rhs: Self) -> TruncatedPoly2 {
        self + &(-rhs)
    }
}

impl Neg for &TruncatedPoly2 {
    type Output = TruncatedPoly2;

    fn neg(self) -> TruncatedPoly2 {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
