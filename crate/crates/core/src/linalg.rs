//! Dense and banded complex linear algebra on top of LAPACK.

use std::os::raw::{c_char, c_int};

use lapack_sys::__BindgenComplex;
use ndarray::{Array1, Array2};
use ndarray_linalg::SVD;
use num_complex::Complex64;

use crate::error::{GpwError, Result};

pub type CMatrix = Array2<Complex64>;
pub type CVector = Array1<Complex64>;

/// Relative singular value threshold used for numerical rank.
pub const RANK_TOL: f64 = 1e-10;

/// Relative pivot size below which a banded factorization is declared singular.
pub const PIVOT_TOL: f64 = 1e-14;

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let (_, s, _) = m.svd(false, false).expect("LAPACK SVD failed to converge");
    s.to_vec()
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numerical_rank(sv: &[f64], rel_tol: f64) -> usize {
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > smax * rel_tol).count()
}

/// Minimum-norm least-squares solution of `a x = b`, discarding singular
/// values at or below `rel_tol * sigma_max`. Returns the solution and the
/// singular values.
pub fn lstsq_min_norm(a: &CMatrix, b: &CVector, rel_tol: f64) -> (CVector, Vec<f64>) {
    if a.is_empty() {
        return (CVector::zeros(a.ncols()), Vec::new());
    }
    let (u, s, vt) = a.svd(true, true).expect("LAPACK SVD failed to converge");
    let (u, vt) = (u.expect("left vectors requested"), vt.expect("right vectors requested"));
    let cutoff = s.first().copied().unwrap_or(0.0) * rel_tol;
    let mut x = CVector::zeros(a.ncols());
    for (k, &sk) in s.iter().enumerate() {
        if sk <= cutoff || sk == 0.0 {
            continue;
        }
        let c: Complex64 = u.column(k).iter().zip(b).map(|(ui, bi)| ui.conj() * bi).sum::<Complex64>() / sk;
        x.zip_mut_with(&vt.row(k), |xi, vi| *xi += vi.conj() * c);
    }
    (x, s.to_vec())
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

pub fn norm2(v: &CVector) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Square matrix with `kl` sub- and `ku` super-diagonals in LAPACK band
/// storage, with room for the fill-in of a pivoted factorization.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix {
            n,
            kl,
            ku,
            ab: vec![Complex64::new(0.0, 0.0); (2 * kl + ku + 1) * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn ldab(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i + self.ku >= j && j + self.kl >= i
    }

    fn index(&self, i: usize, j: usize) -> usize {
        self.kl + self.ku + i - j + j * self.ldab()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if self.in_band(i, j) {
            self.ab[self.index(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Adds `v` to entry `(i, j)`, which must lie inside the band.
    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside the band");
        let k = self.index(i, j);
        self.ab[k] += v;
    }

    pub fn to_dense(&self) -> CMatrix {
        CMatrix::from_shape_fn((self.n, self.n), |(i, j)| self.get(i, j))
    }

    pub fn matvec(&self, x: &CVector) -> CVector {
        let mut y = CVector::zeros(self.n);
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n.saturating_sub(1));
            for i in lo..=hi {
                y[i] += self.ab[self.index(i, j)] * x[j];
            }
        }
        y
    }

    /// Largest column sum of moduli.
    pub fn norm1(&self) -> f64 {
        (0..self.n)
            .map(|j| {
                let lo = j.saturating_sub(self.ku);
                let hi = (j + self.kl).min(self.n - 1);
                (lo..=hi).map(|i| self.ab[self.index(i, j)].norm()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.ab.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// LU with partial pivoting. A pivot smaller than [`PIVOT_TOL`] times the
    /// largest entry is reported as [`GpwError::SingularSystem`].
    pub fn factor(&self) -> Result<BandLu> {
        self.factor_with_tol(PIVOT_TOL)
    }

    /// [`BandMatrix::factor`] with a caller-chosen relative pivot threshold;
    /// `0.0` only rejects exactly zero pivots.
    pub fn factor_with_tol(&self, pivot_tol: f64) -> Result<BandLu> {
        let mut lu = self.clone();
        let n = self.n as c_int;
        let (kl, ku, ldab) = (self.kl as c_int, self.ku as c_int, self.ldab() as c_int);
        let mut ipiv = vec![0 as c_int; self.n];
        let mut info: c_int = 0;
        if self.n > 0 {
            // SAFETY: `ab` holds ldab * n entries and Complex64 is layout
            // compatible with the LAPACK complex type.
            unsafe {
                lapack_sys::zgbtrf_(&n, &n, &kl, &ku, lu.ab.as_mut_ptr().cast(), &ldab, ipiv.as_mut_ptr(), &mut info);
            }
        }
        let scale = self.max_abs();
        let diag = self.kl + self.ku;
        for i in 0..self.n {
            let pivot = lu.ab[diag + i * self.ldab()].norm();
            if !(pivot > pivot_tol * scale) {
                return Err(GpwError::SingularSystem { row: i, pivot });
            }
        }
        debug_assert!(info >= 0);
        Ok(BandLu {
            lu,
            ipiv,
            anorm: self.norm1(),
        })
    }
}

/// Factorization produced by [`BandMatrix::factor`].
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    ipiv: Vec<c_int>,
    anorm: f64,
}

impl BandLu {
    pub fn solve(&self, b: &CVector) -> CVector {
        let mut x = b.to_vec();
        let m = &self.lu;
        let (n, kl, ku, ldab, nrhs) = (m.n as c_int, m.kl as c_int, m.ku as c_int, m.ldab() as c_int, 1 as c_int);
        let trans = b'N' as c_char;
        let mut info: c_int = 0;
        if m.n > 0 {
            // SAFETY: sizes match the factorization; see `factor`.
            unsafe {
                lapack_sys::zgbtrs_(
                    &trans,
                    &n,
                    &kl,
                    &ku,
                    &nrhs,
                    m.ab.as_ptr().cast(),
                    &ldab,
                    self.ipiv.as_ptr(),
                    x.as_mut_ptr().cast::<__BindgenComplex<f64>>(),
                    &n,
                    &mut info,
                );
            }
        }
        debug_assert_eq!(info, 0);
        CVector::from(x)
    }

    /// Estimate of the 1-norm condition number `|A|_1 |A^-1|_1`.
    pub fn condition_estimate(&self) -> f64 {
        let m = &self.lu;
        if m.n == 0 {
            return 1.0;
        }
        let (n, kl, ku, ldab) = (m.n as c_int, m.kl as c_int, m.ku as c_int, m.ldab() as c_int);
        let norm = b'1' as c_char;
        let mut rcond = 0.0;
        let mut work = vec![Complex64::new(0.0, 0.0); 2 * m.n];
        let mut rwork = vec![0.0; m.n];
        let mut info: c_int = 0;
        // SAFETY: workspace sizes follow the LAPACK documentation.
        unsafe {
            lapack_sys::zgbcon_(
                &norm,
                &n,
                &kl,
                &ku,
                m.ab.as_ptr().cast(),
                &ldab,
                self.ipiv.as_ptr(),
                &self.anorm,
                &mut rcond,
                work.as_mut_ptr().cast(),
                rwork.as_mut_ptr(),
                &mut info,
            );
        }
        if rcond > 0.0 {
            1.0 / rcond
        } else {
            f64::INFINITY
        }
    }
}
