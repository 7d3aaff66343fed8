//! Uniform rectangular meshes with edge connectivity.

use crate::error::{GpwError, Result};
use crate::geom::Point;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    /// Shared by cells `k` and `j`; the normal points from `k` into `j`.
    Interior { k: usize, j: usize },
    /// On the domain boundary; the normal points out of cell `k`.
    Boundary { k: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: Point,
    pub b: Point,
    pub normal: Point,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }

    pub fn at(&self, t: f64) -> Point {
        Point::new(self.a.x + t * (self.b.x - self.a.x), self.a.y + t * (self.b.y - self.a.y))
    }
}

/// `nx * ny` equal cells numbered `k = ix * ny + iy`, so vertical neighbours
/// differ by one and horizontal neighbours by `ny`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    domain: Rect,
    nx: usize,
    ny: usize,
    edges: Vec<Edge>,
}

impl Mesh {
    pub fn domain(&self) -> Rect {
        self.domain
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (self.domain.width() / self.nx as f64, self.domain.height() / self.ny as f64)
    }

    /// Largest cell side.
    pub fn side(&self) -> f64 {
        let (hx, hy) = self.cell_size();
        hx.max(hy)
    }

    /// Cell diameter, the same for every cell.
    pub fn h(&self) -> f64 {
        let (hx, hy) = self.cell_size();
        hx.hypot(hy)
    }

    pub fn cell_index(&self, ix: usize, iy: usize) -> usize {
        ix * self.ny + iy
    }

    pub fn center(&self, k: usize) -> Point {
        let (hx, hy) = self.cell_size();
        let (ix, iy) = (k / self.ny, k % self.ny);
        Point::new(
            self.domain.x0 + (ix as f64 + 0.5) * hx,
            self.domain.y0 + (iy as f64 + 0.5) * hy,
        )
    }

    pub fn centers(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.cell_count()).map(|k| self.center(k))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| matches!(e.kind, EdgeKind::Interior { .. }))
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(|e| matches!(e.kind, EdgeKind::Boundary { .. }))
    }

    /// Cell containing `m`; points on shared edges go to the cell with the
    /// larger index.
    pub fn locate(&self, m: Point) -> Result<usize> {
        let d = self.domain;
        let tol = 1e-12 * d.width().max(d.height());
        if !(m.x >= d.x0 - tol && m.x <= d.x1 + tol && m.y >= d.y0 - tol && m.y <= d.y1 + tol) {
            return Err(GpwError::PointOutsideMesh { x: m.x, y: m.y });
        }
        let (hx, hy) = self.cell_size();
        let ix = (((m.x - d.x0) / hx).floor().max(0.0) as usize).min(self.nx - 1);
        let iy = (((m.y - d.y0) / hy).floor().max(0.0) as usize).min(self.ny - 1);
        Ok(self.cell_index(ix, iy))
    }
}

/// Uniform mesh of `domain`. Every breakline `x = c` strictly inside the
/// domain must fall on a vertical grid line.
pub fn build_mesh(domain: Rect, nx: usize, ny: usize, breaklines_x: &[f64]) -> Result<Mesh> {
    if nx == 0 || ny == 0 {
        return Err(GpwError::InvalidArgument(format!("mesh needs at least one cell, got {nx}x{ny}")));
    }
    if !(domain.width() > 0.0 && domain.height() > 0.0) {
        return Err(GpwError::InvalidArgument("domain must have positive area".into()));
    }
    let hx = domain.width() / nx as f64;
    let hy = domain.height() / ny as f64;
    for &c in breaklines_x {
        if c > domain.x0 && c < domain.x1 {
            let s = (c - domain.x0) / hx;
            if (s - s.round()).abs() > 1e-9 {
                return Err(GpwError::BreaklineMisaligned { x: c });
            }
        }
    }
    let node = |ix: usize, iy: usize| Point::new(domain.x0 + ix as f64 * hx, domain.y0 + iy as f64 * hy);
    let k = |ix: usize, iy: usize| ix * ny + iy;
    let mut edges = Vec::with_capacity(2 * nx * ny + nx + ny);
    // vertical edges, left to right
    for ix in 0..=nx {
        for iy in 0..ny {
            let (a, b) = (node(ix, iy), node(ix, iy + 1));
            let kind = if ix == 0 {
                edges.push(Edge { a, b, normal: Point::new(-1.0, 0.0), kind: EdgeKind::Boundary { k: k(0, iy) } });
                continue;
            } else if ix == nx {
                EdgeKind::Boundary { k: k(nx - 1, iy) }
            } else {
                EdgeKind::Interior { k: k(ix - 1, iy), j: k(ix, iy) }
            };
            edges.push(Edge { a, b, normal: Point::new(1.0, 0.0), kind });
        }
    }
    // horizontal edges, bottom to top
    for iy in 0..=ny {
        for ix in 0..nx {
            let (a, b) = (node(ix, iy), node(ix + 1, iy));
            let kind = if iy == 0 {
                edges.push(Edge { a, b, normal: Point::new(0.0, -1.0), kind: EdgeKind::Boundary { k: k(ix, 0) } });
                continue;
            } else if iy == ny {
                EdgeKind::Boundary { k: k(ix, ny - 1) }
            } else {
                EdgeKind::Interior { k: k(ix, iy - 1), j: k(ix, iy) }
            };
            edges.push(Edge { a, b, normal: Point::new(0.0, 1.0), kind });
        }
    }
    Ok(Mesh { domain, nx, ny, edges })
}
