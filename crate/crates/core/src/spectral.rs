//! Certified spectral radii, quotient matrices and equitable partitions.
//!
//! The numeric engine is power iteration on `M + I` for a symmetric
//! nonnegative matrix `M`, run separately on each irreducible block. Each
//! step brackets the Perron root of the block from both sides:
//!
//! * lower: `max(⟨x, Mx⟩ / ⟨x, x⟩, min_i (Mx)_i / x_i)`
//! * upper: `max_i (Mx)_i / x_i`
//!
//! and iteration stops once half the bracket width is within tolerance.
//! The midpoint is reported with the half-width as its residual.

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("power iteration did not reach residual {tol:e} within {iterations} iterations (last {residual:e})")]
    NoConvergence {
        tol: f64,
        iterations: usize,
        residual: f64,
    },
    #[error("cells do not partition the vertex set: {0}")]
    NotAPartition(String),
    #[error("cell {0} is empty")]
    EmptyCell(usize),
    #[error("second graph is not a subgraph of the first")]
    NotASubgraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Estimate of a largest eigenvalue together with a bound on its error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralEstimate {
    pub value: f64,
    /// `|value - λ₁| <= residual`.
    pub residual: f64,
    pub iterations: usize,
}

impl SpectralEstimate {
    pub fn lower(&self) -> f64 {
        self.value - self.residual
    }

    pub fn upper(&self) -> f64 {
        self.value + self.residual
    }
}

/// Sparse symmetric nonnegative matrix, row `i` lists `(column, weight)`.
type SparseRows = Vec<Vec<(usize, f64)>>;

fn check_tol(tol: f64) -> Result<(), SpectralError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(SpectralError::InvalidTolerance(tol))
    }
}

/// Largest adjacency eigenvalue of `g`, certified to `tol`.
///
/// Edgeless graphs give exactly 0 with residual 0.
pub fn spectral_radius(g: &Graph, tol: f64) -> Result<SpectralEstimate, SpectralError> {
    check_tol(tol)?;
    let rows: SparseRows = (0..g.n())
        .map(|v| g.neighbors(v).iter().map(|&w| (w, 1.0)).collect())
        .collect();
    perron_root(&rows, tol)
}

fn perron_root(rows: &SparseRows, tol: f64) -> Result<SpectralEstimate, SpectralError> {
    let mut best = SpectralEstimate {
        value: 0.0,
        residual: 0.0,
        iterations: 0,
    };
    for block in irreducible_blocks(rows) {
        let est = perron_block(rows, &block, tol)?;
        best.residual = best.residual.max(est.residual);
        best.iterations = best.iterations.max(est.iterations);
        best.value = best.value.max(est.value);
    }
    Ok(best)
}

fn irreducible_blocks(rows: &SparseRows) -> Vec<Vec<usize>> {
    let n = rows.len();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut block = vec![root];
        let mut i = 0;
        while i < block.len() {
            let u = block[i];
            i += 1;
            for &(w, weight) in &rows[u] {
                if weight > 0.0 && !seen[w] {
                    seen[w] = true;
                    block.push(w);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

fn perron_block(rows: &SparseRows, block: &[usize], tol: f64) -> Result<SpectralEstimate, SpectralError> {
    let size = block.len();
    let mut local = vec![usize::MAX; rows.len()];
    for (i, &v) in block.iter().enumerate() {
        local[v] = i;
    }
    let sub: SparseRows = block
        .iter()
        .map(|&v| rows[v].iter().map(|&(w, x)| (local[w], x)).collect())
        .collect();

    if size == 1 {
        let diag = sub[0].iter().map(|&(_, x)| x).sum();
        return Ok(SpectralEstimate {
            value: diag,
            residual: 0.0,
            iterations: 0,
        });
    }

    let mut x = vec![1.0f64; size];
    let mut y = vec![0.0f64; size];
    let mut half_width = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        for (i, row) in sub.iter().enumerate() {
            y[i] = x[i] + row.iter().map(|&(j, w)| w * x[j]).sum::<f64>();
        }
        let (mut xy, mut xx) = (0.0, 0.0);
        let (mut ratio_min, mut ratio_max) = (f64::INFINITY, 0.0f64);
        for i in 0..size {
            xy += x[i] * y[i];
            xx += x[i] * x[i];
            let r = y[i] / x[i];
            ratio_min = ratio_min.min(r);
            ratio_max = ratio_max.max(r);
        }
        let lower = (xy / xx).max(ratio_min);
        let upper = ratio_max.max(lower);
        // a few ulps of slack for rounding in the products above
        half_width = 0.5 * (upper - lower) + 4.0 * f64::EPSILON * upper;
        if half_width <= tol {
            return Ok(SpectralEstimate {
                value: 0.5 * (upper + lower) - 1.0,
                residual: half_width,
                iterations: iteration,
            });
        }
        let scale = y.iter().copied().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / scale;
        }
    }
    Err(SpectralError::NoConvergence {
        tol,
        iterations: MAX_ITERATIONS,
        residual: half_width,
    })
}

/// Quotient matrix of a vertex partition with exact rational entries.
///
/// `entry(i, j)` is the average number of neighbours in cell `j` of a vertex
/// in cell `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMatrix {
    cell_sizes: Vec<usize>,
    /// `edge_ends[i][j]`: edge endpoints in cell `i` whose other end is in
    /// cell `j` (edges inside a cell are counted twice).
    edge_ends: Vec<Vec<usize>>,
}

impl QuotientMatrix {
    pub fn size(&self) -> usize {
        self.cell_sizes.len()
    }

    pub fn cell_sizes(&self) -> &[usize] {
        &self.cell_sizes
    }

    pub fn entry(&self, i: usize, j: usize) -> Ratio<i64> {
        Ratio::new(self.edge_ends[i][j] as i64, self.cell_sizes[i] as i64)
    }

    pub fn entries(&self) -> Vec<Vec<Ratio<i64>>> {
        (0..self.size())
            .map(|i| (0..self.size()).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    fn entry_f64(&self, i: usize, j: usize) -> f64 {
        self.edge_ends[i][j] as f64 / self.cell_sizes[i] as f64
    }
}

fn validate_partition(n: usize, cells: &[VertexSet]) -> Result<Vec<usize>, SpectralError> {
    let mut cell_of = vec![usize::MAX; n];
    for (i, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(SpectralError::EmptyCell(i));
        }
        cell.check_within(n)?;
        for &v in cell.iter() {
            if cell_of[v] != usize::MAX {
                return Err(SpectralError::NotAPartition(format!(
                    "vertex {v} in cells {} and {i}",
                    cell_of[v]
                )));
            }
            cell_of[v] = i;
        }
    }
    if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
        return Err(SpectralError::NotAPartition(format!("vertex {v} not covered")));
    }
    Ok(cell_of)
}

pub fn quotient_matrix(g: &Graph, cells: &[VertexSet]) -> Result<QuotientMatrix, SpectralError> {
    let cell_of = validate_partition(g.n(), cells)?;
    let s = cells.len();
    let mut edge_ends = vec![vec![0usize; s]; s];
    for &(u, v) in g.edges() {
        edge_ends[cell_of[u]][cell_of[v]] += 1;
        edge_ends[cell_of[v]][cell_of[u]] += 1;
    }
    Ok(QuotientMatrix {
        cell_sizes: cells.iter().map(VertexSet::len).collect(),
        edge_ends,
    })
}

/// Largest eigenvalue of a quotient matrix.
///
/// `1×1` and anti-diagonal `2×2` matrices use closed forms (`b₀₀` and
/// `√(b₀₁·b₁₀)`); anything else goes through the certified engine on the
/// symmetrisation `D^{1/2} B D^{-1/2}`, `D = diag(cell sizes)`.
pub fn quotient_lambda1(q: &QuotientMatrix) -> f64 {
    match q.size() {
        0 => 0.0,
        1 => q.entry_f64(0, 0),
        2 if q.edge_ends[0][0] == 0 && q.edge_ends[1][1] == 0 => {
            let product = q.entry(0, 1) * q.entry(1, 0);
            (*product.numer() as f64 / *product.denom() as f64).sqrt()
        }
        _ => {
            quotient_lambda1_estimate(q, DEFAULT_TOL)
                .expect("symmetric nonnegative blocks converge under the shift")
                .value
        }
    }
}

/// Certified engine applied to the symmetrised quotient, for any size.
pub fn quotient_lambda1_estimate(q: &QuotientMatrix, tol: f64) -> Result<SpectralEstimate, SpectralError> {
    check_tol(tol)?;
    let s = q.size();
    // (D^{1/2} B D^{-1/2})_{ij} = edge_ends[i][j] / sqrt(n_i n_j)
    let rows: SparseRows = (0..s)
        .map(|i| {
            (0..s)
                .filter(|&j| q.edge_ends[i][j] > 0)
                .map(|j| {
                    let scale = (q.cell_sizes[i] as f64 * q.cell_sizes[j] as f64).sqrt();
                    (j, q.edge_ends[i][j] as f64 / scale)
                })
                .collect()
        })
        .collect();
    perron_root(&rows, tol)
}

/// Every vertex of cell `i` has exactly `b[i][j]` neighbours in cell `j`.
pub fn is_equitable(g: &Graph, cells: &[VertexSet]) -> Result<bool, SpectralError> {
    let q = quotient_matrix(g, cells)?;
    let cell_of = validate_partition(g.n(), cells)?;
    let s = cells.len();
    let mut counts = vec![0usize; s];
    for (i, cell) in cells.iter().enumerate() {
        for &v in cell.iter() {
            counts.iter_mut().for_each(|c| *c = 0);
            for &w in g.neighbors(v) {
                counts[cell_of[w]] += 1;
            }
            // exact: count * |V_i| == edge_ends[i][j]
            if (0..s).any(|j| counts[j] * q.cell_sizes[i] != q.edge_ends[i][j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// How a subgraph is related to its host in [`check_monotonicity`].
#[derive(Debug, Clone, Copy)]
pub enum Subgraph<'a> {
    /// Same vertex set, subset of the edges.
    Spanning(&'a Graph),
    /// Induced on the given vertices.
    Induced(&'a VertexSet),
}

/// `λ₁(h) <= λ₁(g) + 2·tol` with both sides certified to `tol`.
pub fn check_monotonicity(g: &Graph, h: Subgraph<'_>, tol: f64) -> Result<bool, SpectralError> {
    let sub = match h {
        Subgraph::Spanning(h) => {
            if !h.is_spanning_subgraph_of(g) {
                return Err(SpectralError::NotASubgraph);
            }
            h.clone()
        }
        Subgraph::Induced(keep) => g.induced_subgraph(keep)?,
    };
    let host = spectral_radius(g, tol)?;
    let part = spectral_radius(&sub, tol)?;
    Ok(part.value <= host.value + 2.0 * tol)
}
