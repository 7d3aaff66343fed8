//! Disk-error convergence studies for the Airy test case `beta = x - 1`,
//! `u = Ai(x) exp(i y)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{fit_local, fit_unchecked, target_taylor, FitResult};
use crate::error::{GpwError, Result};
use crate::geom::Point;
use crate::gpw::{basis_set, CoefficientField, Normalization};
use crate::special::{airy_plane_solution, field_affine, field_constant, AnalyticSolution};

/// Errors below this fraction of `max |u|` on the disk are treated as
/// round-off and their orders are flagged.
pub const SATURATION_REL: f64 = 1e-13;

const CIRCLES: usize = 8;
const ANGLES: usize = 64;

/// Sampling set of the disk of radius `h` around `g`: `g` itself plus 64
/// equi-spaced points on each of the circles of radius `h k / 8`, `k = 1..8`.
pub fn disk_samples(g: Point, h: f64) -> Vec<Point> {
    let mut pts = Vec::with_capacity(1 + CIRCLES * ANGLES);
    pts.push(g);
    for k in 1..=CIRCLES {
        let r = h * k as f64 / CIRCLES as f64;
        for a in 0..ANGLES {
            pts.push(g.polar(r, 2.0 * PI * a as f64 / ANGLES as f64));
        }
    }
    pts
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskError {
    /// `max |u - u_a|`.
    pub value: f64,
    /// `max |grad u - grad u_a|`.
    pub grad: f64,
    /// `max |u|`, the reference for saturation.
    pub u_max: f64,
}

impl DiskError {
    pub fn saturated(&self) -> bool {
        self.value < SATURATION_REL * self.u_max
    }
}

/// Maximum errors of the fit over the sampled disk of radius `h` around `center`.
pub fn disk_error(u: &dyn AnalyticSolution, fit: &FitResult, center: Point, h: f64) -> Result<DiskError> {
    if !(h > 0.0) {
        return Err(GpwError::InvalidArgument(format!("disk radius must be positive, got {h}")));
    }
    let mut out = DiskError { value: 0.0, grad: 0.0, u_max: 0.0 };
    for m in disk_samples(center, h) {
        let ue = u.value(m)?;
        let ge = u.gradient(m)?;
        let (ua, ga) = fit.eval_with_grad(m);
        out.value = out.value.max((ue - ua).norm());
        out.grad = out.grad.max(((ge[0] - ga[0]).norm_sqr() + (ge[1] - ga[1]).norm_sqr()).sqrt());
        out.u_max = out.u_max.max(ue.norm());
    }
    Ok(out)
}

/// Placement of the anchor relative to the cut-off line `x = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// `G = (-3, 1)`, where `beta < 0`.
    Propagative,
    /// `G = (2, 1)`, where `beta > 0`.
    NonPropagative,
    /// `G = (1 - h, 1)`: the disk touches the cut-off.
    TowardCutoff,
    /// `G = (1, 1)`, on the cut-off.
    OnCutoff,
    /// `G = (1 - d, 1)` over a grid of radii and distances.
    HdSweep,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Propagative,
        Scenario::NonPropagative,
        Scenario::TowardCutoff,
        Scenario::OnCutoff,
        Scenario::HdSweep,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Scenario::Propagative => "propagative",
            Scenario::NonPropagative => "nonpropagative",
            Scenario::TowardCutoff => "toward-cutoff",
            Scenario::OnCutoff => "on-cutoff",
            Scenario::HdSweep => "hd-sweep",
        }
    }

    /// Anchor for a disk of radius `h`; `d` is only used by the sweep.
    pub fn anchor(self, h: f64, d: f64) -> Point {
        match self {
            Scenario::Propagative => Point::new(-3.0, 1.0),
            Scenario::NonPropagative => Point::new(2.0, 1.0),
            Scenario::TowardCutoff => Point::new(1.0 - h, 1.0),
            Scenario::OnCutoff => Point::new(1.0, 1.0),
            Scenario::HdSweep => Point::new(1.0 - d, 1.0),
        }
    }
}

impl FromStr for Scenario {
    type Err = GpwError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.id() == key || sc.id().replace('-', "") == key.replace('-', ""))
            .ok_or_else(|| GpwError::Parse(format!("unknown scenario '{s}'")))
    }
}

/// Basis used for the local fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StudyBasis {
    Gpw(Normalization),
    /// Classical plane waves `exp(N d.(M - G))` with `N = sqrt(beta(G))`.
    PlaneWave,
}

impl StudyBasis {
    pub fn label(&self) -> &'static str {
        match self {
            StudyBasis::Gpw(norm) => norm.label(),
            StudyBasis::PlaneWave => "pw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyRow {
    pub h: f64,
    pub error_value: f64,
    pub error_grad: f64,
    /// `log2(e(2h) / e(h))` against the previous row; `None` on the first row.
    pub order_value: Option<f64>,
    pub order_grad: Option<f64>,
    pub saturated: bool,
}

/// Local fit of the Airy solution at `g` with `2n + 1` functions.
fn fit_at(g: Point, n: usize, basis: StudyBasis, checked: bool) -> Result<FitResult> {
    let field = field_affine();
    let q = n + 1;
    let p = 2 * n + 1;
    let set = match basis {
        StudyBasis::Gpw(norm) => basis_set(&field, g, q, p, norm)?,
        StudyBasis::PlaneWave => {
            let beta_g = field.value(g).re;
            basis_set(&field_constant(beta_g), g, q, p, Normalization::BetaLocal)?
        }
    };
    let target = target_taylor(&airy_plane_solution(), g, n)?;
    if checked {
        fit_local(&set, &target)
    } else {
        fit_unchecked(&set, &target).map(|(f, _)| f)
    }
}

/// Order of convergence between consecutive radii.
pub fn order_between(h_prev: f64, e_prev: f64, h: f64, e: f64) -> f64 {
    (e_prev / e).ln() / (h_prev / h).ln()
}

/// One row per radius; radii are expected in decreasing order.
pub fn convergence_study(scenario: Scenario, n: usize, basis: StudyBasis, radii: &[f64]) -> Result<Vec<StudyRow>> {
    if scenario == Scenario::HdSweep {
        return Err(GpwError::InvalidArgument("the h-d sweep produces a matrix, use hd_sweep".into()));
    }
    if n == 0 {
        return Err(GpwError::InvalidArgument("interpolation order n must be >= 1".into()));
    }
    if radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(GpwError::InvalidArgument("radii must be strictly decreasing".into()));
    }
    let u = airy_plane_solution();
    let errors: Vec<DiskError> = radii
        .par_iter()
        .map(|&h| {
            let g = scenario.anchor(h, 0.0);
            let fit = fit_at(g, n, basis, true)?;
            disk_error(&u, &fit, g, h)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(radii.len());
    for (k, (&h, e)) in radii.iter().zip(&errors).enumerate() {
        let prev = k.checked_sub(1).map(|p| (radii[p], errors[p]));
        rows.push(StudyRow {
            h,
            error_value: e.value,
            error_grad: e.grad,
            order_value: prev.map(|(hp, ep)| order_between(hp, ep.value, h, e.value)),
            order_grad: prev.map(|(hp, ep)| order_between(hp, ep.grad, h, e.grad)),
            saturated: e.saturated(),
        });
    }
    Ok(rows)
}

/// Value errors `e(h, d)` on disks of radius `h` centred at `(1 - d, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HdSweep {
    pub n: usize,
    pub radii: Vec<f64>,
    pub distances: Vec<f64>,
    /// `errors[row][col]` for `radii[row]`, `distances[col]`.
    pub errors: Vec<Vec<f64>>,
}

/// Fits are not rank-checked here: small distances push `|N|` towards the
/// numerical rank threshold and the degradation is what the sweep measures.
pub fn hd_sweep(n: usize, norm: Normalization, radii: &[f64], distances: &[f64]) -> Result<HdSweep> {
    let u = airy_plane_solution();
    let cells: Vec<(usize, usize)> = (0..radii.len())
        .flat_map(|r| (0..distances.len()).map(move |c| (r, c)))
        .collect();
    let values: Vec<f64> = cells
        .par_iter()
        .map(|&(r, c)| {
            let (h, d) = (radii[r], distances[c]);
            let g = Scenario::HdSweep.anchor(h, d);
            let fit = fit_at(g, n, StudyBasis::Gpw(norm), false)?;
            Ok(disk_error(&u, &fit, g, h)?.value)
        })
        .collect::<Result<_>>()?;
    let errors = values.chunks(distances.len().max(1)).map(<[f64]>::to_vec).collect();
    Ok(HdSweep {
        n,
        radii: radii.to_vec(),
        distances: distances.to_vec(),
        errors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NSweepRow {
    pub n_param: Complex64,
    pub max_coefficient: f64,
    pub fit_residual: f64,
    pub sigma_min: f64,
    pub rank: usize,
}

/// Fits `u` at `g` with bases normalized by each value in `n_values`.
pub fn n_sweep(
    field: &dyn CoefficientField,
    u: &dyn AnalyticSolution,
    g: Point,
    n: usize,
    n_values: &[Complex64],
) -> Result<Vec<NSweepRow>> {
    let target = target_taylor(u, g, n)?;
    n_values
        .par_iter()
        .map(|&n_param| {
            if n_param == Complex64::new(0.0, 0.0) {
                return Err(GpwError::ZeroN);
            }
            let set = basis_set(field, g, n + 1, 2 * n + 1, Normalization::Custom(n_param))?;
            let (fit, rank) = fit_unchecked(&set, &target)?;
            Ok(NSweepRow {
                n_param,
                max_coefficient: fit.max_coefficient(),
                fit_residual: fit.fit_residual,
                sigma_min: fit.singular_values.last().copied().unwrap_or(0.0),
                rank,
            })
        })
        .collect()
}

pub const STUDY_HEADER: &str = "scenario,n,norm,h,err_val,err_grad,order_val,order_grad,saturated_flag";

fn opt(v: Option<f64>) -> String {
    v.map(|o| format!("{o:.2}")).unwrap_or_default()
}

/// CSV rows (without header) for one study.
pub fn study_csv(scenario: Scenario, n: usize, basis: StudyBasis, rows: &[StudyRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{:e},{:.6e},{:.6e},{},{},{}",
            scenario.id(),
            n,
            basis.label(),
            r.h,
            r.error_value,
            r.error_grad,
            opt(r.order_value),
            opt(r.order_grad),
            u8::from(r.saturated)
        );
    }
    s
}

/// Dense matrix CSV: header `h\d,d1,d2,...`, then one line per radius.
pub fn hd_csv(sweep: &HdSweep) -> String {
    let mut s = String::from("h\\d");
    for d in &sweep.distances {
        let _ = write!(s, ",{d:e}");
    }
    s.push('\n');
    for (h, row) in sweep.radii.iter().zip(&sweep.errors) {
        let _ = write!(s, "{h:e}");
        for e in row {
            let _ = write!(s, ",{e:.3e}");
        }
        s.push('\n');
    }
    s
}

pub fn n_sweep_csv(rows: &[NSweepRow]) -> String {
    let mut s = String::from("n_re,n_im,abs_n,max_coeff,fit_residual,sigma_min,rank\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{:e},{:e},{:e},{:.6e},{:.6e},{:.6e},{}",
            r.n_param.re,
            r.n_param.im,
            r.n_param.norm(),
            r.max_coefficient,
            r.fit_residual,
            r.sigma_min,
            r.rank
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpw::design_gpw;
    use crate::special::WaveSolution;

    fn radii(from: i32, to: i32) -> Vec<f64> {
        (from..=to).map(|k| 0.5f64.powi(k)).collect()
    }

    #[test]
    fn sampling_set() {
        let pts = disk_samples(Point::new(1.0, 2.0), 0.5);
        assert_eq!(pts.len(), 513);
        assert_eq!(pts[0], Point::new(1.0, 2.0));
        let far = pts.iter().map(|p| (*p - Point::new(1.0, 2.0)).norm()).fold(0.0, f64::max);
        assert!((far - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fitting_a_member_is_exact() {
        let field = field_affine();
        let g = Point::new(-3.0, 1.0);
        let set = basis_set(&field, g, 3, 5, Normalization::BetaLocal).unwrap();
        let u = WaveSolution(set[0].clone());
        let fit = fit_local(&set, &u.taylor(g, 2).unwrap()).unwrap();
        let e = disk_error(&u, &fit, g, 0.25).unwrap();
        assert!(e.value <= 1e-12 && e.grad <= 1e-12);
    }

    #[test]
    fn centre_error_bounded_by_residual() {
        let g = Point::new(2.0, 1.0);
        let fit = fit_at(g, 2, StudyBasis::Gpw(Normalization::ConstantI), true).unwrap();
        let e = disk_error(&airy_plane_solution(), &fit, g, 1e-300).unwrap();
        assert!(e.value <= fit.fit_residual + 1e-15);
    }

    #[test]
    fn propagative_order_three() {
        let rows = convergence_study(Scenario::Propagative, 2, StudyBasis::Gpw(Normalization::BetaLocal), &radii(4, 5))
            .unwrap();
        let o = rows[1].order_value.unwrap();
        assert!((o - 3.0).abs() < 0.15, "{o}");
        assert!(rows[0].order_value.is_none());
    }

    #[test]
    fn on_cutoff_rejects_beta_normalization() {
        let err = convergence_study(Scenario::OnCutoff, 2, StudyBasis::Gpw(Normalization::BetaLocal), &[0.25])
            .unwrap_err();
        assert!(matches!(err, GpwError::ZeroLocalWavenumber { .. }));
    }

    #[test]
    fn radii_must_decrease() {
        let b = StudyBasis::Gpw(Normalization::ConstantI);
        assert!(convergence_study(Scenario::Propagative, 1, b, &[0.25, 0.5]).is_err());
        assert!(convergence_study(Scenario::HdSweep, 1, b, &[0.5]).is_err());
    }

    #[test]
    fn scenario_names_round_trip() {
        for s in Scenario::ALL {
            assert_eq!(s.id().parse::<Scenario>().unwrap(), s);
        }
        assert_eq!("TOWARD_CUTOFF".parse::<Scenario>().unwrap(), Scenario::TowardCutoff);
        assert!("sideways".parse::<Scenario>().is_err());
    }

    #[test]
    fn matched_classical_sweep_is_bounded() {
        let field = field_constant(-1.0);
        let g = Point::new(0.0, 0.0);
        let u = WaveSolution(design_gpw(&field, g, 3, 0.3, Normalization::ConstantI).unwrap());
        let rows = n_sweep(&field, &u, g, 2, &[Complex64::new(0.0, 1.0)]).unwrap();
        assert!(rows[0].max_coefficient < 10.0);
        assert!(rows[0].fit_residual < 1e-12);
        assert_eq!(n_sweep(&field, &u, g, 2, &[Complex64::new(0.0, 0.0)]).unwrap_err(), GpwError::ZeroN);
    }

    #[test]
    fn csv_layout() {
        let rows = vec![StudyRow {
            h: 0.25,
            error_value: 1e-3,
            error_grad: 2e-2,
            order_value: None,
            order_grad: None,
            saturated: false,
        }];
        let s = study_csv(Scenario::Propagative, 2, StudyBasis::Gpw(Normalization::BetaLocal), &rows);
        assert_eq!(s, "propagative,2,beta,2.5e-1,1.000000e-3,2.000000e-2,,,0\n");
        assert_eq!(STUDY_HEADER.split(',').count(), s.trim().split(',').count());
    }
}
