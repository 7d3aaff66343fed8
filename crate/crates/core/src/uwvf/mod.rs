//! Ultra weak variational formulation with generalized plane wave bases.
//!
//! Each cell `k` carries `p = 2n + 1` waves `phi_k^l` anchored at its centre.
//! With `V = (-d_nu + i gamma) phi` and `F = (d_nu + i gamma) phi` taken with
//! the outward normal of the cell that owns `phi`, the discrete problem is
//! `(D - C) X = b` where
//!
//! * `D[(k,l),(k,m)] = int_{dOmega_k} V_k^m conj(V_k^l) / gamma`,
//! * `C[(k,l),(j,m)] = int_{Sigma_kj} V_j^m conj(F_k^l) / gamma` across
//!   interior edges, plus `Q int_{Gamma_k} V_k^m conj(F_k^l) / gamma` on the
//!   boundary,
//! * `b[(k,l)] = int_{Gamma_k} g conj(F_k^l) / gamma`.
//!
//! `g` is the incoming trace `(d_nu + i gamma) u` on the boundary. The
//! solution is `u_h = sum X[(k,l)] phi_k^l` on cell `k`.

mod mesh;
mod quadrature;
mod study;

pub use mesh::{build_mesh, Edge, EdgeKind, Mesh, Rect};
pub use quadrature::{make_quadrature, EdgeQuadrature, QuadratureRule};
pub use study::{
    airy_domain, field_dump_csv, h_convergence, uwvf_csv, UwvfRow, UwvfStudy, SATURATED_CONDITION, UWVF_HEADER,
};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GpwError, Result};
use crate::geom::Point;
use crate::gpw::{basis_set, CoefficientField, Gpw, Normalization};
use crate::linalg::{BandMatrix, CMatrix, CVector, PIVOT_TOL};
use crate::special::AnalyticSolution;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Incoming boundary trace `g`.
pub trait TraceData: Sync {
    fn incoming(&self, m: Point, normal: Point, gamma: f64) -> Result<Complex64>;
}

/// `g = (d_nu + i gamma) u` for a known solution `u`.
pub struct ImpedanceTrace<'a>(pub &'a dyn AnalyticSolution);

impl TraceData for ImpedanceTrace<'_> {
    fn incoming(&self, m: Point, normal: Point, gamma: f64) -> Result<Complex64> {
        let g = self.0.gradient(m)?;
        Ok(g[0] * normal.x + g[1] * normal.y + I * gamma * self.0.value(m)?)
    }
}

/// `g = 0`.
pub struct ZeroTrace;

impl TraceData for ZeroTrace {
    fn incoming(&self, _: Point, _: Point, _: f64) -> Result<Complex64> {
        Ok(Complex64::new(0.0, 0.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UwvfParams {
    pub n: usize,
    pub norm: Normalization,
    pub gamma: f64,
    /// Boundary reflection coefficient, in `[0, 1)`.
    pub q: f64,
    pub quad: QuadratureRule,
}

impl UwvfParams {
    /// `gamma = 1`, `Q = 0`, and the ten-point rule from `n = 4` on.
    pub fn new(n: usize, norm: Normalization) -> Self {
        UwvfParams {
            n,
            norm,
            gamma: 1.0,
            q: 0.0,
            quad: if n >= 4 { QuadratureRule::NewtonCotes10 } else { QuadratureRule::Weddle7 },
        }
    }

    pub fn with_quad(mut self, quad: QuadratureRule) -> Self {
        self.quad = quad;
        self
    }

    pub fn p(&self) -> usize {
        2 * self.n + 1
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(GpwError::InvalidArgument("n must be >= 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(GpwError::InvalidArgument(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(0.0..1.0).contains(&self.q) {
            return Err(GpwError::QOutOfRange(self.q));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct UwvfSystem {
    mesh: Mesh,
    params: UwvfParams,
    bases: Vec<Vec<Gpw>>,
    matrix: BandMatrix,
    rhs: CVector,
    d_blocks: Vec<CMatrix>,
}

#[derive(Debug, Clone)]
pub struct UwvfSolution {
    pub x: CVector,
    /// 1-norm condition estimate of the system matrix.
    pub cond_estimate: f64,
}

/// Values and normal derivatives of every basis function of a cell at the
/// quadrature nodes of an edge.
struct Traces {
    value: Vec<Vec<Complex64>>,
    normal: Vec<Vec<Complex64>>,
}

fn traces(basis: &[Gpw], points: &[Point], nu: Point) -> Traces {
    let mut value = Vec::with_capacity(basis.len());
    let mut normal = Vec::with_capacity(basis.len());
    for g in basis {
        let (v, d): (Vec<_>, Vec<_>) = points
            .iter()
            .map(|&m| {
                let (phi, grad) = g.eval_with_grad(m);
                (phi, grad[0] * nu.x + grad[1] * nu.y)
            })
            .unzip();
        value.push(v);
        normal.push(d);
    }
    Traces { value, normal }
}

/// `sum_q w_q a(m, q) conj(b(l, q))` as a `p x p` block indexed `[l, m]`.
fn block(
    w: &[f64],
    p: usize,
    a: impl Fn(usize, usize) -> Complex64,
    b: impl Fn(usize, usize) -> Complex64,
) -> CMatrix {
    CMatrix::from_shape_fn((p, p), |(l, m)| {
        w.iter().enumerate().map(|(q, &wq)| a(m, q) * b(l, q).conj() * wq).sum()
    })
}

enum Contribution {
    Block { row: usize, col: usize, sign: f64, values: CMatrix },
    Rhs { cell: usize, values: Vec<Complex64> },
}

fn edge_contributions(
    edge: &Edge,
    bases: &[Vec<Gpw>],
    params: &UwvfParams,
    quad: &EdgeQuadrature,
    data: &dyn TraceData,
) -> Result<Vec<Contribution>> {
    let p = params.p();
    let gamma = params.gamma;
    let scale = edge.length() / gamma;
    let w: Vec<f64> = quad.weights().iter().map(|&wq| wq * scale).collect();
    let points: Vec<Point> = quad.nodes().iter().map(|&t| edge.at(t)).collect();
    let ig = I * gamma;
    let mut out = Vec::with_capacity(4);
    match edge.kind {
        EdgeKind::Interior { k, j } => {
            let n = edge.normal;
            let tk = traces(&bases[k], &points, n);
            let tj = traces(&bases[j], &points, n);
            // derivatives in `t*.normal` are along n, outward for k and inward for j
            let vk = |m: usize, q: usize| -tk.normal[m][q] + ig * tk.value[m][q];
            let fk = |m: usize, q: usize| tk.normal[m][q] + ig * tk.value[m][q];
            let vj = |m: usize, q: usize| tj.normal[m][q] + ig * tj.value[m][q];
            let fj = |m: usize, q: usize| -tj.normal[m][q] + ig * tj.value[m][q];
            out.push(Contribution::Block { row: k, col: k, sign: 1.0, values: block(&w, p, vk, vk) });
            out.push(Contribution::Block { row: j, col: j, sign: 1.0, values: block(&w, p, vj, vj) });
            out.push(Contribution::Block { row: k, col: j, sign: -1.0, values: block(&w, p, vj, fk) });
            out.push(Contribution::Block { row: j, col: k, sign: -1.0, values: block(&w, p, vk, fj) });
        }
        EdgeKind::Boundary { k } => {
            let t = traces(&bases[k], &points, edge.normal);
            let v = |m: usize, q: usize| -t.normal[m][q] + ig * t.value[m][q];
            let f = |m: usize, q: usize| t.normal[m][q] + ig * t.value[m][q];
            out.push(Contribution::Block { row: k, col: k, sign: 1.0, values: block(&w, p, v, v) });
            if params.q != 0.0 {
                out.push(Contribution::Block { row: k, col: k, sign: -params.q, values: block(&w, p, v, f) });
            }
            let g: Vec<Complex64> = points
                .iter()
                .map(|&m| data.incoming(m, edge.normal, gamma))
                .collect::<Result<_>>()?;
            let values = (0..p)
                .map(|l| (0..points.len()).map(|q| g[q] * f(l, q).conj() * w[q]).sum())
                .collect();
            out.push(Contribution::Rhs { cell: k, values });
        }
    }
    Ok(out)
}

/// Builds the system on `mesh` for the coefficient `field`.
pub fn assemble(
    mesh: &Mesh,
    field: &dyn CoefficientField,
    params: UwvfParams,
    data: &dyn TraceData,
) -> Result<UwvfSystem> {
    params.validate()?;
    let (_, ny) = mesh.dims();
    let p = params.p();
    let bases: Vec<Vec<Gpw>> = (0..mesh.cell_count())
        .into_par_iter()
        .map(|k| basis_set(field, mesh.center(k), params.n + 1, p, params.norm))
        .collect::<Result<_>>()?;
    let quad = make_quadrature(params.quad);
    let contributions: Vec<Vec<Contribution>> = mesh
        .edges()
        .par_iter()
        .map(|e| edge_contributions(e, &bases, &params, &quad, data))
        .collect::<Result<_>>()?;

    let dofs = mesh.cell_count() * p;
    let band = ((ny + 1) * p - 1).min(dofs.saturating_sub(1));
    let mut matrix = BandMatrix::zeros(dofs, band, band);
    let mut rhs = CVector::zeros(dofs);
    let mut d_blocks = vec![CMatrix::zeros((p, p)); mesh.cell_count()];
    // merged in edge order so the result does not depend on scheduling
    for c in contributions.into_iter().flatten() {
        match c {
            Contribution::Block { row, col, sign, values } => {
                if row == col && sign == 1.0 {
                    d_blocks[row] += &values;
                }
                for ((l, m), v) in values.indexed_iter() {
                    matrix.add(row * p + l, col * p + m, v * sign);
                }
            }
            Contribution::Rhs { cell, values } => {
                for (l, v) in values.into_iter().enumerate() {
                    rhs[cell * p + l] += v;
                }
            }
        }
    }
    Ok(UwvfSystem {
        mesh: mesh.clone(),
        params,
        bases,
        matrix,
        rhs,
        d_blocks,
    })
}

impl UwvfSystem {
    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn params(&self) -> UwvfParams {
        self.params
    }

    pub fn dofs(&self) -> usize {
        self.rhs.len()
    }

    /// Global index of basis function `l` of cell `k`.
    pub fn dof(&self, k: usize, l: usize) -> usize {
        k * self.params.p() + l
    }

    pub fn basis(&self, k: usize) -> &[Gpw] {
        &self.bases[k]
    }

    pub fn matrix(&self) -> &BandMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &CVector {
        &self.rhs
    }

    /// Diagonal block of `D` for cell `k`.
    pub fn d_block(&self, k: usize) -> &CMatrix {
        &self.d_blocks[k]
    }

    /// Banded LU solve.
    pub fn solve(&self) -> Result<UwvfSolution> {
        self.solve_with_pivot_tol(PIVOT_TOL)
    }

    /// Solve that only rejects exactly zero pivots, for systems whose
    /// conditioning has reached working precision.
    pub fn solve_unchecked(&self) -> Result<UwvfSolution> {
        self.solve_with_pivot_tol(0.0)
    }

    fn solve_with_pivot_tol(&self, tol: f64) -> Result<UwvfSolution> {
        let lu = self.matrix.factor_with_tol(tol)?;
        Ok(UwvfSolution {
            x: lu.solve(&self.rhs),
            cond_estimate: lu.condition_estimate(),
        })
    }

    /// `u_h(m)` from the coefficients of the cell containing `m`.
    pub fn reconstruct(&self, x: &CVector, m: Point) -> Result<Complex64> {
        let k = self.mesh.locate(m)?;
        Ok(self.bases[k]
            .iter()
            .enumerate()
            .map(|(l, g)| x[self.dof(k, l)] * g.eval(m))
            .sum())
    }

    /// `u_h` at every cell centre, where each wave equals one.
    pub fn center_values(&self, x: &CVector) -> Vec<Complex64> {
        let p = self.params.p();
        (0..self.mesh.cell_count())
            .map(|k| x.slice(ndarray::s![k * p..(k + 1) * p]).sum())
            .collect()
    }
}

/// Relative discrete L2 error over the cell centres.
pub fn center_error(sys: &UwvfSystem, x: &CVector, u: &dyn AnalyticSolution) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, uh) in sys.center_values(x).into_iter().enumerate() {
        let ue = u.value(sys.mesh().center(k))?;
        num += (uh - ue).norm_sqr();
        den += ue.norm_sqr();
    }
    if den.sqrt() < 1e-300 {
        return Err(GpwError::DegenerateNorm);
    }
    Ok((num / den).sqrt())
}
