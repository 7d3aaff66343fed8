//! Local Taylor-fit interpolation with a basis of waves sharing one anchor.
//!
//! Column `l` of the fit matrix holds the Taylor table of basis member `l` at
//! the anchor (rows in [`crate::poly2`] slot order). For a target `u` with
//! Taylor vector `B`, the coefficients `x` solve `M x = B` in the least-squares
//! sense; when `u` solves the PDE and `q >= n + 1`, `B` lies in the range of
//! `M` and the system is consistent.

mod study;

pub use study::{
    convergence_study, disk_error, disk_samples, hd_csv, hd_sweep, n_sweep, n_sweep_csv, order_between,
    study_csv, DiskError, HdSweep, NSweepRow, Scenario, StudyBasis, StudyRow, SATURATION_REL,
    STUDY_HEADER,
};

use num_complex::Complex64;

use crate::error::{GpwError, Result};
use crate::factorial;
use crate::geom::Point;
use crate::gpw::{basis_direction, Gpw, TaylorTable};
use ndarray::s;

use crate::linalg::{lstsq_min_norm, norm2, numerical_rank, singular_values, CMatrix, CVector, RANK_TOL};
use crate::poly2::{multi_indices, slot_count};
use crate::special::AnalyticSolution;

/// Taylor matrix of the classical waves `exp(N ((x - x_G) cos t + (y - y_G) sin t))`
/// for the given directions: entry `((k1, k2), l)` is
/// `N^(k1 + k2) cos^k1 t_l sin^k2 t_l / (k1! k2!)`.
pub fn build_mnc_with_directions(n_param: Complex64, n: usize, thetas: &[f64]) -> Result<CMatrix> {
    if n_param == Complex64::new(0.0, 0.0) {
        return Err(GpwError::ZeroN);
    }
    let rows = slot_count(n);
    let mut m = CMatrix::zeros((rows, thetas.len()));
    for (l, &t) in thetas.iter().enumerate() {
        let (s, c) = t.sin_cos();
        for (r, (k1, k2)) in multi_indices(n).enumerate() {
            m[[r, l]] = n_param.powu((k1 + k2) as u32) * c.powi(k1 as i32) * s.powi(k2 as i32)
                / (factorial(k1) * factorial(k2));
        }
    }
    Ok(m)
}

/// [`build_mnc_with_directions`] with the `2n + 1` equi-spaced directions.
pub fn build_mnc(n_param: Complex64, n: usize) -> Result<CMatrix> {
    if n == 0 {
        return Err(GpwError::InvalidArgument("interpolation order n must be >= 1".into()));
    }
    let p = 2 * n + 1;
    let thetas: Vec<f64> = (0..p).map(|l| basis_direction(l, p)).collect();
    build_mnc_with_directions(n_param, n, &thetas)
}

fn common_anchor(basis: &[Gpw]) -> Result<Point> {
    let first = basis
        .first()
        .ok_or_else(|| GpwError::InvalidArgument("empty basis".into()))?
        .anchor();
    if basis.iter().any(|g| g.anchor() != first) {
        return Err(GpwError::MixedAnchors);
    }
    Ok(first)
}

/// Taylor matrix of a basis: column `l` is the order-`n` table of member `l`.
pub fn build_mn(basis: &[Gpw], n: usize) -> Result<CMatrix> {
    common_anchor(basis)?;
    let mut m = CMatrix::zeros((slot_count(n), basis.len()));
    for (l, g) in basis.iter().enumerate() {
        let t = g.taylor_table_exp(n);
        for (r, v) in t.entries().iter().enumerate() {
            m[[r, l]] = *v;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankDiagnostics {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

impl RankDiagnostics {
    pub fn condition(&self) -> f64 {
        match (self.singular_values.first(), self.singular_values.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            _ => f64::INFINITY,
        }
    }
}

/// Numerical rank at threshold `1e-10 sigma_max` plus the full spectrum.
pub fn rank_diagnostics(m: &CMatrix) -> RankDiagnostics {
    let singular_values = singular_values(m);
    RankDiagnostics {
        rank: numerical_rank(&singular_values, RANK_TOL),
        singular_values,
    }
}

/// Unit lower triangular `L` with `M_n = L M_n^C`, built row by row: row `r`
/// of `M_n - M_n^C` is expressed as a combination of rows `< r` of `M_n^C`.
/// Returns `L` and the largest reconstruction residual relative to the
/// largest entry of `M_n`.
pub fn ln_factorization(basis: &[Gpw], n: usize) -> Result<(CMatrix, f64)> {
    common_anchor(basis)?;
    let mn = build_mn(basis, n)?;
    let thetas: Vec<f64> = basis.iter().map(Gpw::theta).collect();
    let mnc = build_mnc_with_directions(basis[0].n(), n, &thetas)?;
    let rows = mn.nrows();
    let scale = crate::linalg::max_abs(&mn).max(f64::MIN_POSITIVE);
    let mut l = CMatrix::eye(rows);
    let mut worst: f64 = 0.0;
    for r in 0..rows {
        let target: CVector = &mn.row(r) - &mnc.row(r);
        if r == 0 {
            worst = worst.max(norm2(&target) / scale);
            continue;
        }
        // columns of `a` are the earlier rows of M^C
        let a = mnc.slice(s![0..r, ..]).t().to_owned();
        let (coeffs, _) = lstsq_min_norm(&a, &target, 1e-13);
        worst = worst.max(norm2(&(a.dot(&coeffs) - &target)) / scale);
        l.slice_mut(s![r, 0..r]).assign(&coeffs);
    }
    Ok((l, worst))
}

/// Residual of the triangular reconstruction `M_n = L_n M_n^C`.
pub fn verify_ln_factorization(basis: &[Gpw], n: usize) -> Result<f64> {
    ln_factorization(basis, n).map(|(_, r)| r)
}

/// Taylor vector `B_n` of `u` at `g`.
pub fn target_taylor(u: &dyn AnalyticSolution, g: Point, n: usize) -> Result<TaylorTable> {
    u.taylor(g, n)
}

/// Coefficients of a local fit together with the basis they refer to.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub coefficients: Vec<Complex64>,
    /// `|M_n x - B_n|`.
    pub fit_residual: f64,
    pub singular_values: Vec<f64>,
    basis: Vec<Gpw>,
}

impl FitResult {
    pub fn basis(&self) -> &[Gpw] {
        &self.basis
    }

    pub fn anchor(&self) -> Point {
        self.basis[0].anchor()
    }

    /// `u_a(m) = sum x_l phi_l(m)`.
    pub fn eval(&self, m: Point) -> Complex64 {
        self.basis
            .iter()
            .zip(&self.coefficients)
            .map(|(g, x)| g.eval(m) * x)
            .sum()
    }

    pub fn eval_with_grad(&self, m: Point) -> (Complex64, [Complex64; 2]) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut gr = [v; 2];
        for (g, x) in self.basis.iter().zip(&self.coefficients) {
            let (phi, d) = g.eval_with_grad(m);
            v += phi * x;
            gr[0] += d[0] * x;
            gr[1] += d[1] * x;
        }
        (v, gr)
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Taylor table of `u_a` at the anchor.
    pub fn taylor(&self, n: usize) -> TaylorTable {
        let m = build_mn(&self.basis, n).expect("basis shares an anchor");
        let v = m.dot(&CVector::from(self.coefficients.clone()));
        let poly = crate::poly2::TruncatedPoly2::from_slots(n, v.iter().copied().collect())
            .expect("row count matches the order");
        TaylorTable::new(self.anchor(), poly)
    }
}

/// Least-squares fit keeping every nonzero singular value, with no rank
/// check. Returns the fit and the numerical rank at the usual threshold.
pub fn fit_unchecked(basis: &[Gpw], target: &TaylorTable) -> Result<(FitResult, usize)> {
    let anchor = common_anchor(basis)?;
    if anchor != target.anchor() {
        return Err(GpwError::MixedAnchors);
    }
    let m = build_mn(basis, target.order())?;
    let b = CVector::from(target.entries().to_vec());
    let (x, sv) = lstsq_min_norm(&m, &b, 0.0);
    let rank = numerical_rank(&sv, RANK_TOL);
    let fit_residual = norm2(&(m.dot(&x) - &b));
    Ok((
        FitResult {
            coefficients: x.iter().copied().collect(),
            fit_residual,
            singular_values: sv,
            basis: basis.to_vec(),
        },
        rank,
    ))
}

/// Fits `2n + 1` basis members to the order-`n` Taylor table `target`.
pub fn fit_local(basis: &[Gpw], target: &TaylorTable) -> Result<FitResult> {
    let n = target.order();
    let required = 2 * n + 1;
    if basis.len() != required {
        return Err(GpwError::InvalidArgument(format!(
            "order-{n} fit needs {required} basis functions, got {}",
            basis.len()
        )));
    }
    let (fit, rank) = fit_unchecked(basis, target)?;
    if rank < required {
        return Err(GpwError::RankDeficient { rank, required });
    }
    Ok(fit)
}

/// Checks the relations satisfied by Taylor tables of solutions of
/// `Laplacian u = beta u` up to the degree `n - 2` equations, returning the
/// largest defect relative to `max(1, max |c|)`.
pub fn k_membership_defect(column: &[Complex64], n: usize, beta: &crate::poly2::TruncatedPoly2) -> f64 {
    let c = |i: usize, j: usize| column[crate::poly2::slot(i, j)];
    let scale = column.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let mut worst: f64 = 0.0;
    if n < 2 {
        return 0.0;
    }
    for (k1, k2) in multi_indices(n - 2) {
        let lhs = c(k1 + 2, k2) * ((k1 + 1) * (k1 + 2)) as f64 + c(k1, k2 + 2) * ((k2 + 1) * (k2 + 2)) as f64;
        let mut rhs = Complex64::new(0.0, 0.0);
        for i in 0..=k1 {
            for j in 0..=k2 {
                rhs += beta.get(i, j) * c(k1 - i, k2 - j);
            }
        }
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpw::{basis_set, Normalization, CoefficientField};
    use crate::special::{airy_plane_solution, field_affine, field_constant, WaveSolution, ZeroSolution};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mnc_order_one() {
        let n_param = c(0.3, 1.2);
        let m = build_mnc(n_param, 1).unwrap();
        assert_eq!(m.dim(), (3, 3));
        for l in 0..3 {
            let t = basis_direction(l, 3);
            assert_eq!(m[[0, l]], c(1.0, 0.0));
            assert!((m[[1, l]] - n_param * t.cos()).norm() < 1e-15);
            assert!((m[[2, l]] - n_param * t.sin()).norm() < 1e-15);
        }
        assert_eq!(build_mnc(c(0.0, 0.0), 2).unwrap_err(), GpwError::ZeroN);
    }

    #[test]
    fn mnc_with_unit_kappa_alternates() {
        let m = build_mnc(c(0.0, 1.0), 3).unwrap();
        for (r, (k1, k2)) in multi_indices(3).enumerate() {
            for l in 0..7 {
                let v = m[[r, l]];
                if (k1 + k2) % 2 == 0 {
                    assert!(v.im.abs() < 1e-16);
                } else {
                    assert!(v.re.abs() < 1e-16);
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_diagnostics(&build_mnc(c(0.0, 1.0), 1).unwrap()).rank, 3);
        for n in 1..=5 {
            let collided = build_mnc_with_directions(c(0.0, 1.0), n, &vec![0.4; 2 * n + 1]).unwrap();
            assert!(rank_diagnostics(&collided).rank <= n + 1);
        }
        assert_eq!(rank_diagnostics(&CMatrix::zeros((6, 5))).rank, 0);
    }

    #[test]
    fn constant_beta_matrices_coincide() {
        let field = field_constant(-2.5);
        let basis = basis_set(&field, Point::new(0.1, 0.2), 4, 7, Normalization::BetaLocal).unwrap();
        let mn = build_mn(&basis, 3).unwrap();
        let mnc = build_mnc(basis[0].n(), 3).unwrap();
        assert!((mn - mnc).iter().all(|d| d.norm() < 1e-13));
        let (l, resid) = ln_factorization(&basis, 3).unwrap();
        assert!(resid < 1e-13);
        assert!((l - CMatrix::eye(10)).iter().all(|d| d.norm() < 1e-12));
    }

    #[test]
    fn leading_rows_match_classical() {
        let field = field_affine();
        let basis = basis_set(&field, Point::new(2.0, 1.0), 3, 5, Normalization::ConstantI).unwrap();
        let mn = build_mn(&basis, 2).unwrap();
        let mnc = build_mnc(c(0.0, 1.0), 2).unwrap();
        for r in 0..3 {
            for l in 0..5 {
                assert!((mn[[r, l]] - mnc[[r, l]]).norm() < 1e-15);
            }
        }
        let (lmat, resid) = ln_factorization(&basis, 2).unwrap();
        assert!(resid <= 1e-9);
        for r in 0..3 {
            for s in 0..r {
                assert!(lmat[[r, s]].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn mixed_anchors_rejected() {
        let field = field_affine();
        let mut basis = basis_set(&field, Point::new(2.0, 1.0), 2, 3, Normalization::ConstantI).unwrap();
        basis.extend(basis_set(&field, Point::new(2.5, 1.0), 2, 3, Normalization::ConstantI).unwrap());
        assert_eq!(build_mn(&basis, 1).unwrap_err(), GpwError::MixedAnchors);
    }

    #[test]
    fn fit_examples() {
        let field = field_affine();
        let g = Point::new(-3.0, 1.0);
        let basis = basis_set(&field, g, 3, 5, Normalization::BetaLocal).unwrap();

        let own = WaveSolution(basis[0].clone());
        let fit = fit_local(&basis, &own.taylor(g, 2).unwrap()).unwrap();
        assert!(fit.fit_residual < 1e-12);
        assert!((fit.coefficients[0] - c(1.0, 0.0)).norm() < 1e-10);
        for x in &fit.coefficients[1..] {
            assert!(x.norm() < 1e-10);
        }

        let zero = fit_local(&basis, &ZeroSolution.taylor(g, 2).unwrap()).unwrap();
        assert!(zero.coefficients.iter().all(|x| x.norm() == 0.0));

        let b = target_taylor(&airy_plane_solution(), g, 2).unwrap();
        let fit = fit_local(&basis, &b).unwrap();
        assert!(fit.fit_residual <= 1e-8 * b.norm());
        // Taylor coefficients of the approximant reproduce the target
        let ta = fit.taylor(2);
        for (a, e) in ta.entries().iter().zip(b.entries()) {
            assert!((a - e).norm() <= fit.fit_residual + 1e-13);
        }
    }

    #[test]
    fn fit_needs_matching_size() {
        let field = field_affine();
        let g = Point::new(-3.0, 1.0);
        let basis = basis_set(&field, g, 3, 7, Normalization::BetaLocal).unwrap();
        let b = target_taylor(&airy_plane_solution(), g, 2).unwrap();
        assert!(matches!(fit_local(&basis, &b), Err(GpwError::InvalidArgument(_))));
    }

    #[test]
    fn collided_directions_are_rank_deficient() {
        let field = field_affine();
        let g = Point::new(-3.0, 1.0);
        let one = crate::gpw::design_gpw(&field, g, 3, 0.2, Normalization::BetaLocal).unwrap();
        let basis = vec![one; 5];
        let b = target_taylor(&airy_plane_solution(), g, 2).unwrap();
        assert!(matches!(fit_local(&basis, &b), Err(GpwError::RankDeficient { .. })));
    }

    #[test]
    fn columns_and_target_lie_in_k() {
        let field = field_affine();
        for (g, norm) in [
            (Point::new(-3.0, 1.0), Normalization::BetaLocal),
            (Point::new(1.0, 1.0), Normalization::ConstantI),
        ] {
            let n = 4;
            let basis = basis_set(&field, g, n + 1, 2 * n + 1, norm).unwrap();
            let beta = field.taylor(g, n);
            let mn = build_mn(&basis, n).unwrap();
            for l in 0..mn.ncols() {
                let col: Vec<Complex64> = mn.column(l).iter().copied().collect();
                assert!(k_membership_defect(&col, n, &beta) < 1e-10);
            }
            let b = target_taylor(&airy_plane_solution(), g, n).unwrap();
            assert!(k_membership_defect(b.entries(), n, &beta) < 1e-10);
        }
    }
}
