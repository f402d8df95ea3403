//! Jacobian of edge inversive distances with respect to centers and radii, its
//! center-pinned and pinned reductions, rank certificates and velocity solves.
//!
//! Columns are grouped per vertex as `(x, y, r)`; rows follow the lexicographic order
//! of edges.

use nalgebra::{DMatrix, DVector};

use crate::disks::Packing;
use crate::error::{Error, Result};
use crate::graph::Edge;
use crate::triangulation::Triangulation;

pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    X,
    Y,
    R,
}

/// One column: a coordinate of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Column {
    pub vertex: usize,
    pub coord: Coord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Full,
    CenterPinned,
    Pinned,
}

#[derive(Debug, Clone)]
pub struct JacobianMatrix {
    pub matrix: DMatrix<f64>,
    pub rows: Vec<Edge>,
    pub cols: Vec<Column>,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankCertificate {
    pub rank: usize,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl RankCertificate {
    pub fn ratio(&self) -> f64 {
        if self.sigma_max > 0.0 {
            self.sigma_min / self.sigma_max
        } else {
            0.0
        }
    }
}

/// Partial derivatives of `invdist(i, j)` with respect to `(xᵢ, yᵢ, rᵢ, xⱼ, yⱼ, rⱼ)`.
pub fn edge_gradient(p: &Packing, i: usize, j: usize) -> [f64; 6] {
    let (a, b) = (p.disk(i), p.disk(j));
    let (ri, rj) = (a.radius, b.radius);
    let d = a.center - b.center;
    let d2 = d.norm_squared();
    let rr = ri * rj;
    [
        d.x / rr,
        d.y / rr,
        (rj * rj - ri * ri - d2) / (2.0 * ri * ri * rj),
        -d.x / rr,
        -d.y / rr,
        (ri * ri - rj * rj - d2) / (2.0 * rj * rj * ri),
    ]
}

/// Columns for every coordinate of `0..n`, skipping those rejected by `keep`.
pub(crate) fn columns(n: usize, keep: impl Fn(&Column) -> bool) -> Vec<Column> {
    (0..n)
        .flat_map(|vertex| [Coord::X, Coord::Y, Coord::R].map(|coord| Column { vertex, coord }))
        .filter(keep)
        .collect()
}

/// Dense Jacobian restricted to the given rows and columns.
pub(crate) fn assemble(p: &Packing, rows: &[Edge], cols: &[Column]) -> DMatrix<f64> {
    let n = p.len();
    let mut index = vec![None; 3 * n];
    for (k, c) in cols.iter().enumerate() {
        index[3 * c.vertex + c.coord as usize] = Some(k);
    }
    let mut m = DMatrix::zeros(rows.len(), cols.len());
    for (row, e) in rows.iter().enumerate() {
        let g = edge_gradient(p, e.0, e.1);
        for (slot, v) in [e.0, e.0, e.0, e.1, e.1, e.1].into_iter().enumerate() {
            if let Some(col) = index[3 * v + slot % 3] {
                m[(row, col)] = g[slot];
            }
        }
    }
    m
}

pub fn rank_certificate_of(m: &DMatrix<f64>, rank_tol: f64) -> RankCertificate {
    if m.is_empty() {
        return RankCertificate { rank: 0, sigma_min: 0.0, sigma_max: 0.0 };
    }
    let sv = m.singular_values();
    let sigma_max = sv.max();
    let sigma_min = sv.min();
    let rank = sv.iter().filter(|&&s| s > rank_tol * sigma_max).count();
    RankCertificate { rank, sigma_min, sigma_max }
}

/// Solves a square system by LU, reporting a singular matrix.
pub(crate) fn solve_square(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    m.clone().lu().solve(rhs).ok_or(Error::Singular(0.0))
}

impl JacobianMatrix {
    /// Full Jacobian over an explicit edge list (sorted internally).
    pub fn build_for_edges(p: &Packing, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut rows: Vec<Edge> = edges.into_iter().collect();
        rows.sort_unstable();
        rows.dedup();
        if let Some(e) = rows.iter().find(|e| e.1 >= p.len() || e.0 == e.1) {
            return Err(Error::Precondition(format!("edge {e} does not fit a packing of {} disks", p.len())));
        }
        let cols = columns(p.len(), |_| true);
        let matrix = assemble(p, &rows, &cols);
        Ok(JacobianMatrix { matrix, rows, cols, variant: Variant::Full })
    }

    pub fn build_full(g: &Triangulation, p: &Packing) -> Result<Self> {
        if g.n() != p.len() {
            return Err(Error::Precondition(format!("graph has {} vertices, packing has {} disks", g.n(), p.len())));
        }
        JacobianMatrix::build_for_edges(p, g.edges())
    }

    pub fn row_of(&self, e: Edge) -> Option<usize> {
        self.rows.binary_search(&e).ok()
    }

    fn select(&self, keep_row: impl Fn(&Edge) -> bool, keep_col: impl Fn(&Column) -> bool, variant: Variant) -> Self {
        let ri: Vec<usize> = (0..self.rows.len()).filter(|&i| keep_row(&self.rows[i])).collect();
        let ci: Vec<usize> = (0..self.cols.len()).filter(|&j| keep_col(&self.cols[j])).collect();
        let matrix = DMatrix::from_fn(ri.len(), ci.len(), |a, b| self.matrix[(ri[a], ci[b])]);
        JacobianMatrix {
            matrix,
            rows: ri.iter().map(|&i| self.rows[i]).collect(),
            cols: ci.iter().map(|&j| self.cols[j]).collect(),
            variant,
        }
    }

    /// Drops the position columns of the three marked vertices.
    pub fn center_pin(&self, marks: [usize; 3]) -> Result<Self> {
        if self.variant != Variant::Full {
            return Err(Error::Precondition("center_pin expects the full Jacobian".into()));
        }
        check_marks(&self.rows, marks)?;
        Ok(self.select(|_| true, |c| !(marks.contains(&c.vertex) && c.coord != Coord::R), Variant::CenterPinned))
    }

    /// Drops the marked-edge rows and the marked radius columns.
    pub fn pin(&self, marks: [usize; 3]) -> Result<Self> {
        if self.variant != Variant::CenterPinned {
            return Err(Error::Precondition("pin expects the center-pinned Jacobian".into()));
        }
        let marked_edges = marked_edges(marks);
        for (i, e) in self.rows.iter().enumerate() {
            if !marked_edges.contains(e) {
                continue;
            }
            for (j, c) in self.cols.iter().enumerate() {
                let on_marked_radius = marks.contains(&c.vertex) && c.coord == Coord::R;
                if !on_marked_radius && self.matrix[(i, j)] != 0.0 {
                    return Err(Error::Internal(format!("marked edge {e} row has support outside the marked radii")));
                }
            }
        }
        Ok(self.select(
            |e| !marked_edges.contains(e),
            |c| !(marks.contains(&c.vertex) && c.coord == Coord::R),
            Variant::Pinned,
        ))
    }

    pub fn rank_certificate(&self, rank_tol: f64) -> RankCertificate {
        rank_certificate_of(&self.matrix, rank_tol)
    }

    fn check_square(&self) -> Result<()> {
        if self.matrix.nrows() != self.matrix.ncols() {
            return Err(Error::Precondition(format!(
                "matrix is {}x{}, not square",
                self.matrix.nrows(),
                self.matrix.ncols()
            )));
        }
        Ok(())
    }

    /// Velocity along which every pinned-system inversive distance is stationary except
    /// `e_minus`, whose rate is one.
    pub fn flip_velocity(&self, e_minus: Edge) -> Result<DVector<f64>> {
        if self.variant != Variant::Pinned {
            return Err(Error::Precondition("flip_velocity expects the pinned Jacobian".into()));
        }
        self.check_square()?;
        let row = self.row_of(e_minus).ok_or(Error::EdgeAbsent(e_minus))?;
        let mut rhs = DVector::zeros(self.rows.len());
        rhs[row] = 1.0;
        solve_square(&self.matrix, &rhs)
    }

    /// Velocity raising each added edge's inversive distance at its rate while holding
    /// every other row fixed.
    pub fn separation_velocity(&self, added: &[Edge], rates: &[f64]) -> Result<DVector<f64>> {
        if self.variant != Variant::CenterPinned {
            return Err(Error::Precondition("separation_velocity expects the center-pinned Jacobian".into()));
        }
        self.check_square()?;
        if added.len() != rates.len() {
            return Err(Error::Precondition("one rate per added edge is required".into()));
        }
        let mut rhs = DVector::zeros(self.rows.len());
        for (e, &rate) in added.iter().zip(rates) {
            if rate <= 0.0 {
                return Err(Error::Domain(format!("rate for {e} must be positive")));
            }
            rhs[self.row_of(*e).ok_or(Error::EdgeAbsent(*e))?] = rate;
        }
        if added.is_empty() {
            return Ok(rhs);
        }
        solve_square(&self.matrix, &rhs)
    }

    /// Spreads a column-space vector into per-vertex `(dx, dy, dr)` triples.
    pub fn expand(&self, v: &DVector<f64>, n: usize) -> Vec<[f64; 3]> {
        let mut out = vec![[0.0; 3]; n];
        for (c, &x) in self.cols.iter().zip(v.iter()) {
            out[c.vertex][c.coord as usize] = x;
        }
        out
    }
}

pub(crate) fn marked_edges(marks: [usize; 3]) -> [Edge; 3] {
    [Edge::new(marks[0], marks[1]), Edge::new(marks[1], marks[2]), Edge::new(marks[0], marks[2])]
}

fn check_marks(rows: &[Edge], marks: [usize; 3]) -> Result<()> {
    if marks[0] == marks[1] || marks[1] == marks[2] || marks[0] == marks[2] {
        return Err(Error::Domain(format!("marks {marks:?} are not distinct")));
    }
    for e in marked_edges(marks) {
        if rows.binary_search(&e).is_err() {
            return Err(Error::Domain(format!("marked edge {e} is not an edge of the graph")));
        }
    }
    Ok(())
}
