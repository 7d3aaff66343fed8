use ::gpw::special::{airy_ai, airy_derivatives, airy_plane_solution, AnalyticSolution};
use ::gpw::Point;
use statrs::function::gamma::gamma;

/// Classical RK4 for `f'' = x f` from `x = 0`, sampled every `every` steps.
fn rk4_airy(step: f64, steps: usize, every: usize) -> Vec<(f64, f64, f64)> {
    let f0 = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0);
    let g0 = -(3f64.powf(-1.0 / 3.0)) / gamma(1.0 / 3.0);
    let rhs = |x: f64, f: f64, g: f64| (g, x * f);
    let (mut x, mut f, mut g) = (0.0f64, f0, g0);
    let mut out = vec![(x, f, g)];
    for s in 1..=steps {
        let (k1f, k1g) = rhs(x, f, g);
        let (k2f, k2g) = rhs(x + step / 2.0, f + step / 2.0 * k1f, g + step / 2.0 * k1g);
        let (k3f, k3g) = rhs(x + step / 2.0, f + step / 2.0 * k2f, g + step / 2.0 * k2g);
        let (k4f, k4g) = rhs(x + step, f + step * k3f, g + step * k3g);
        f += step / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        g += step / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        x = s as f64 * step;
        if s % every == 0 {
            out.push((x, f, g));
        }
    }
    out
}

#[test]
fn airy_matches_ode_integration() {
    let mut worst: f64 = 0.0;
    for (step, steps) in [(1e-4, 35_000), (-1e-4, 65_000)] {
        for (x, f, g) in rk4_airy(step, steps, 500) {
            let (ai, aip) = airy_ai(x).unwrap();
            worst = worst.max((ai - f).abs()).max((aip - g).abs());
        }
    }
    assert!(worst <= 1e-9, "max deviation {worst:e}");
}

#[test]
fn airy_derivatives_match_finite_differences() {
    let step = 1e-5;
    for k in 0..40 {
        let x = -6.0 + 9.0 * k as f64 / 39.0;
        let d = airy_derivatives(x, 4).unwrap();
        let lo = airy_derivatives(x - step, 3).unwrap();
        let hi = airy_derivatives(x + step, 3).unwrap();
        for order in 1..=4 {
            let fd = (hi[order - 1] - lo[order - 1]) / (2.0 * step);
            let err = (fd - d[order]).abs();
            assert!(err <= 1e-6 * d[order].abs().max(1.0), "x = {x}, k = {order}: {err:e}");
        }
    }
}

#[test]
fn plane_solution_gradient_matches_finite_differences() {
    let u = airy_plane_solution();
    let step = 1e-5;
    for &(x, y) in &[(-5.5, -0.7), (-3.0, 1.0), (0.0, 0.0), (1.0, 0.4), (2.5, -1.0)] {
        let m = Point::new(x, y);
        let g = u.gradient(m).unwrap();
        let dx = (u.value(Point::new(x + step, y)).unwrap() - u.value(Point::new(x - step, y)).unwrap()) / (2.0 * step);
        let dy = (u.value(Point::new(x, y + step)).unwrap() - u.value(Point::new(x, y - step)).unwrap()) / (2.0 * step);
        let scale = g[0].norm().max(g[1].norm()).max(1e-3);
        assert!((dx - g[0]).norm() <= 1e-6 * scale);
        assert!((dy - g[1]).norm() <= 1e-6 * scale);
    }
}

#[test]
fn plane_solution_taylor_entries_match_derivatives() {
    let u = airy_plane_solution();
    let m = Point::new(-2.0, 0.3);
    let t = u.taylor(m, 5).unwrap();
    assert_eq!(t.get(0, 0), u.value(m).unwrap());
    let g = u.gradient(m).unwrap();
    assert!((t.get(1, 0) - g[0]).norm() < 1e-15);
    assert!((t.get(0, 1) - g[1]).norm() < 1e-15);
    // -Lap u + (x - 1) u = 0 at the anchor, in Taylor form
    let lap = 2.0 * t.get(2, 0) + 2.0 * t.get(0, 2);
    assert!((lap - (m.x - 1.0) * t.get(0, 0)).norm() < 1e-13);
}
