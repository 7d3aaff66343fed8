use ::gpw::interp::{
    build_mn, build_mnc, convergence_study, fit_local, k_membership_defect, n_sweep, rank_diagnostics, target_taylor,
    Scenario, StudyBasis,
};
use ::gpw::linalg::{lstsq_min_norm, CVector};
use ::gpw::special::{airy_plane_solution, field_affine};
use ::gpw::{basis_set, CoefficientField, Normalization, Point};
use num_complex::Complex64;
use proptest::prelude::*;

fn anchor() -> impl Strategy<Value = Point> {
    (-6.0..3.0f64, -1.0..1.0f64).prop_map(|(x, y)| Point::new(x, y))
}

#[test]
fn classical_matrix_rank_is_2n_plus_1() {
    let ns = [Complex64::new(0.0, 1.0), Complex64::from_polar(2f64.sqrt(), std::f64::consts::PI / 5.0)];
    for n_param in ns {
        for n in 1..=5 {
            let diag = rank_diagnostics(&build_mnc(n_param, n).unwrap());
            assert_eq!(diag.rank, 2 * n + 1, "N = {n_param}, n = {n}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn columns_and_target_lie_in_k(g in anchor(), n in 2usize..=5) {
        let field = field_affine();
        let basis = basis_set(&field, g, n + 1, 2 * n + 1, Normalization::ConstantI).unwrap();
        let beta = field.taylor(g, n);
        let mn = build_mn(&basis, n).unwrap();
        for col in mn.columns() {
            let c: Vec<Complex64> = col.iter().copied().collect();
            prop_assert!(k_membership_defect(&c, n, &beta) <= 1e-10);
        }
        let b = target_taylor(&airy_plane_solution(), g, n).unwrap();
        prop_assert!(k_membership_defect(b.entries(), n, &beta) <= 1e-10);
    }

    #[test]
    fn common_column_scaling_leaves_the_fit_unchanged(g in anchor(), n in 1usize..=3, sr in -3.0..3.0f64, si in -3.0..3.0f64) {
        prop_assume!(sr.abs() + si.abs() > 0.1);
        let scale = Complex64::new(sr, si);
        let basis = basis_set(&field_affine(), g, n + 1, 2 * n + 1, Normalization::ConstantI).unwrap();
        let target = target_taylor(&airy_plane_solution(), g, n).unwrap();
        let fit = fit_local(&basis, &target).unwrap();
        let scaled = build_mn(&basis, n).unwrap().mapv(|v| v * scale);
        let b = CVector::from(target.entries().to_vec());
        let (x, _) = lstsq_min_norm(&scaled, &b, 1e-10);
        for (xs, x0) in x.iter().zip(&fit.coefficients) {
            prop_assert!((xs * scale - x0).norm() <= 1e-10 * x0.norm().max(1.0));
        }
        for k in 0..8 {
            let m = g.polar(0.1, k as f64);
            let ua: Complex64 = basis.iter().zip(&x).map(|(w, c)| c * scale * w.eval(m)).sum();
            prop_assert!((ua - fit.eval(m)).norm() <= 1e-12 * fit.eval(m).norm().max(1.0));
        }
    }

    #[test]
    fn fitted_taylor_matches_target(g in anchor(), n in 1usize..=4) {
        let field = field_affine();
        let norm = if field.value(g).norm() > 1e-2 { Normalization::BetaLocal } else { Normalization::ConstantI };
        let basis = basis_set(&field, g, n + 1, 2 * n + 1, norm).unwrap();
        let target = target_taylor(&airy_plane_solution(), g, n).unwrap();
        let fit = fit_local(&basis, &target).unwrap();
        prop_assert!(fit.fit_residual <= 1e-8 * target.norm());
        let t = fit.taylor(n);
        for (a, b) in t.entries().iter().zip(target.entries()) {
            prop_assert!((a - b).norm() <= 1e-8 * target.norm() + fit.fit_residual);
        }
    }
}

#[test]
fn gradient_order_follows_value_order() {
    let radii: Vec<f64> = (1..=6).map(|k| 0.5f64.powi(k)).collect();
    let cases = [
        (Scenario::Propagative, StudyBasis::Gpw(Normalization::BetaLocal)),
        (Scenario::Propagative, StudyBasis::Gpw(Normalization::ConstantI)),
        (Scenario::NonPropagative, StudyBasis::Gpw(Normalization::BetaLocal)),
        (Scenario::OnCutoff, StudyBasis::Gpw(Normalization::ConstantI)),
    ];
    for (scenario, basis) in cases {
        for n in 1..=3 {
            let rows = convergence_study(scenario, n, basis, &radii).unwrap();
            for r in rows.iter().filter(|r| !r.saturated) {
                if let (Some(v), Some(g)) = (r.order_value, r.order_grad) {
                    assert!(g >= v - 1.3, "{scenario:?} n = {n} h = {}: {g} vs {v}", r.h);
                }
            }
        }
    }
}

#[test]
fn coefficients_grow_like_inverse_power_n() {
    // min-norm coefficients scale like |N|^-n as N -> 0
    let n = 3;
    let values: Vec<Complex64> = (0..7).map(|k| Complex64::new(0.0, 0.1 * 0.5f64.powi(k))).collect();
    let rows = n_sweep(&field_affine(), &airy_plane_solution(), Point::new(-3.0, 1.0), n, &values).unwrap();
    let first = rows.first().unwrap();
    let last = rows.last().unwrap();
    let slope = (last.max_coefficient / first.max_coefficient).ln() / (last.n_param.norm() / first.n_param.norm()).ln();
    assert!((-3.3..=-2.7).contains(&slope), "slope {slope}");
}
