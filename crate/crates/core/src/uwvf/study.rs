//! Mesh refinement study on the Airy test case.

use std::fmt::Write as _;

use super::{assemble, build_mesh, center_error, ImpedanceTrace, Rect, UwvfParams, UwvfSystem};
use crate::error::{GpwError, Result};
use crate::linalg::CVector;
use crate::special::{airy_plane_solution, field_affine};

/// `[-6, 3] x [-1, 1]`.
pub fn airy_domain() -> Rect {
    Rect::new(-6.0, 3.0, -1.0, 1.0)
}

/// Refinement sequence for `beta = x - 1` with impedance data from
/// `u = Ai(x) exp(i y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct UwvfStudy {
    pub params: UwvfParams,
    /// Cell counts `(nx, ny)` per mesh.
    pub meshes: Vec<(usize, usize)>,
}

impl UwvfStudy {
    /// Square cells of side `h` on the Airy domain, one mesh per side length.
    pub fn square_cells(params: UwvfParams, sides: &[f64]) -> Self {
        let d = airy_domain();
        let meshes = sides
            .iter()
            .map(|h| ((d.width() / h).round() as usize, (d.height() / h).round() as usize))
            .collect();
        UwvfStudy { params, meshes }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UwvfRow {
    /// Largest cell side.
    pub h: f64,
    pub dofs: usize,
    pub error: f64,
    pub cond_estimate: f64,
    /// The system was numerically singular or its condition estimate
    /// reached [`SATURATED_CONDITION`]; the error is then round-off bound.
    pub saturated: bool,
}

/// Condition estimate from which a refinement row is flagged.
pub const SATURATED_CONDITION: f64 = 1e15;

/// Assembles, solves and measures the centre error on every mesh. A system
/// failing the pivot check is solved anyway and its row flagged.
pub fn h_convergence(study: &UwvfStudy) -> Result<Vec<UwvfRow>> {
    let u = airy_plane_solution();
    let field = field_affine();
    study
        .meshes
        .iter()
        .map(|&(nx, ny)| {
            let mesh = build_mesh(airy_domain(), nx, ny, &[])?;
            let sys = assemble(&mesh, &field, study.params, &ImpedanceTrace(&u))?;
            let (sol, singular) = match sys.solve() {
                Ok(sol) => (sol, false),
                Err(GpwError::SingularSystem { .. }) => (sys.solve_unchecked()?, true),
                Err(e) => return Err(e),
            };
            Ok(UwvfRow {
                h: mesh.side(),
                dofs: sys.dofs(),
                error: center_error(&sys, &sol.x, &u)?,
                cond_estimate: sol.cond_estimate,
                saturated: singular || sol.cond_estimate >= SATURATED_CONDITION,
            })
        })
        .collect()
}

pub const UWVF_HEADER: &str = "h,n,norm,quad,dofs,error,cond_estimate";

pub fn uwvf_csv(params: &UwvfParams, rows: &[UwvfRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let _ = writeln!(
            s,
            "{:e},{},{},{},{},{:.6e},{:.6e}",
            r.h,
            params.n,
            params.norm.label(),
            params.quad,
            r.dofs,
            r.error,
            r.cond_estimate
        );
    }
    s
}

/// `x,y,re,im,abs` of `u_h` at the cell centres.
pub fn field_dump_csv(sys: &UwvfSystem, x: &CVector) -> String {
    let mut s = String::from("x,y,re,im,abs\n");
    for (g, v) in sys.mesh().centers().zip(sys.center_values(x)) {
        let _ = writeln!(s, "{},{},{:.9e},{:.9e},{:.9e}", g.x, g.y, v.re, v.im, v.norm());
    }
    s
}
