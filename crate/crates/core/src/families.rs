//! The extremal family ℋ(d,k): connected bipartite graphs whose larger side
//! `A` is `d`-regular, whose smaller side `B` is regular, and with
//! `|A| = |B| + k`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Bipartition, Graph};
use crate::matching::HalfInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parameters overflow the vertex count")]
    Overflow,
    #[error("n - k must be positive and even (n = {n}, k = {k})")]
    Parity { n: usize, k: usize },
    #[error("need n > k (n = {n}, k = {k})")]
    TooFewVertices { n: usize, k: usize },
}

/// Ring-generator parameters: surplus `m` per block, `c` blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RingParams {
    pub m: usize,
    pub c: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub d: usize,
    pub k: usize,
    pub ring: Option<RingParams>,
}

impl FamilyParams {
    pub fn new(d: usize, k: usize) -> Result<Self, FamilyError> {
        if d == 0 {
            return Err(FamilyError::InvalidParams("d must be at least 1".into()));
        }
        Ok(FamilyParams { d, k, ring: None })
    }

    pub fn ring(d: usize, m: usize, c: usize) -> Result<Self, FamilyError> {
        if d == 0 || m == 0 || c == 0 {
            return Err(FamilyError::InvalidParams(format!(
                "d, m, c must be positive (d = {d}, m = {m}, c = {c})"
            )));
        }
        let k = m.checked_mul(c).ok_or(FamilyError::Overflow)?;
        Ok(FamilyParams {
            d,
            k,
            ring: Some(RingParams { m, c }),
        })
    }
}

/// `K_{a,b}` with the `a`-side on vertices `0..a`.
pub fn gen_complete_bipartite(a: usize, b: usize) -> Result<Graph, FamilyError> {
    if a == 0 || b == 0 {
        return Err(FamilyError::InvalidParams(format!(
            "both sides must be nonempty (a = {a}, b = {b})"
        )));
    }
    let n = a.checked_add(b).ok_or(FamilyError::Overflow)?;
    Ok(Graph::from_edges(n, (0..a).flat_map(|u| (a..n).map(move |v| (u, v))))
        .expect("complete bipartite edges are simple"))
}

/// Ring of `c` copies of `K_{d,d+m}`.
///
/// Block `i` occupies vertices `i·(2d+m) ..`: first its `X_i` (size `d`),
/// then its `Y_i` (size `d+m`). Each block loses the edge between the first
/// vertices of `X_i` and `Y_i`, and gains one from the first vertex of `Y_i`
/// to the first vertex of `X_{i+1 mod c}`.
pub fn gen_ring_blocks(d: usize, m: usize, c: usize) -> Result<Graph, FamilyError> {
    FamilyParams::ring(d, m, c)?;
    if d < 2 && c >= 2 {
        return Err(FamilyError::InvalidParams(
            "d >= 2 is required for more than one block".into(),
        ));
    }
    let block = d
        .checked_mul(2)
        .and_then(|x| x.checked_add(m))
        .ok_or(FamilyError::Overflow)?;
    let n = block.checked_mul(c).ok_or(FamilyError::Overflow)?;
    let x_first = |i: usize| i * block;
    let y_first = |i: usize| i * block + d;

    let mut edges = Vec::with_capacity(c * d * (d + m));
    for i in 0..c {
        for x in x_first(i)..y_first(i) {
            for y in y_first(i)..(i + 1) * block {
                if (x, y) != (x_first(i), y_first(i)) {
                    edges.push((x, y));
                }
            }
        }
        edges.push((y_first(i), x_first((i + 1) % c)));
    }
    Ok(Graph::from_edges(n, edges).expect("ring construction is simple"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MembershipFailure {
    NotConnected,
    NotBipartite,
    ASideNotDRegular,
    BSideNotRegular,
    SizeGapMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub is_member: bool,
    pub bipartition: Option<Bipartition>,
    pub d_found: Option<usize>,
    pub k_found: Option<usize>,
    pub failure_reason: Option<MembershipFailure>,
}

impl MembershipReport {
    fn failure(reason: MembershipFailure, bipartition: Option<Bipartition>) -> Self {
        MembershipReport {
            is_member: false,
            bipartition,
            d_found: None,
            k_found: None,
            failure_reason: Some(reason),
        }
    }
}

fn uniform_degree(g: &Graph, side: &crate::graph::VertexSet) -> Option<usize> {
    let mut degrees = side.iter().map(|&v| g.neighbors(v).len());
    let first = degrees.next()?;
    degrees.all(|x| x == first).then_some(first)
}

/// Decides whether `g` lies in ℋ(d,k) for some `d >= 1`, `k >= 0`, and
/// reports the `(d, k)` found.
pub fn membership_report(g: &Graph) -> MembershipReport {
    use MembershipFailure::*;
    if g.n() == 0 || !g.is_connected() {
        return MembershipReport::failure(NotConnected, None);
    }
    let bipartition = match g.bipartition().expect("connectivity checked") {
        Some(bp) => bp,
        None => return MembershipReport::failure(NotBipartite, None),
    };
    if bipartition.side_b.is_empty() {
        // single vertex: no side can be d-regular with d >= 1
        return MembershipReport::failure(ASideNotDRegular, Some(bipartition));
    }

    let degree_a = uniform_degree(g, &bipartition.side_a);
    let degree_b = uniform_degree(g, &bipartition.side_b);
    let (a_len, b_len) = (bipartition.side_a.len(), bipartition.side_b.len());
    let oriented = match a_len.cmp(&b_len) {
        std::cmp::Ordering::Less => Some((bipartition.clone().swapped(), degree_b, degree_a)),
        std::cmp::Ordering::Greater => Some((bipartition.clone(), degree_a, degree_b)),
        // equal sides: either may serve as A; side_a is preferred
        std::cmp::Ordering::Equal => None,
    };
    let (bipartition, d, b_degree) = match oriented {
        Some(x) => x,
        None if degree_a.is_some() => (bipartition, degree_a, degree_b),
        None => (bipartition.swapped(), degree_b, degree_a),
    };
    let Some(d) = d else {
        return MembershipReport::failure(ASideNotDRegular, Some(bipartition));
    };
    if b_degree.is_none() {
        return MembershipReport::failure(BSideNotRegular, Some(bipartition));
    }
    let k = bipartition.side_a.len() - bipartition.side_b.len();
    MembershipReport {
        is_member: true,
        bipartition: Some(bipartition),
        d_found: Some(d),
        k_found: Some(k),
        failure_reason: None,
    }
}

/// Membership in ℋ(d,k) for the given `(d, k)`.
pub fn membership_for(g: &Graph, d: usize, k: usize) -> MembershipReport {
    let mut report = membership_report(g);
    if report.is_member {
        let reason = if report.d_found != Some(d) {
            Some(MembershipFailure::ASideNotDRegular)
        } else if report.k_found != Some(k) {
            Some(MembershipFailure::SizeGapMismatch)
        } else {
            None
        };
        if reason.is_some() {
            report.is_member = false;
            report.failure_reason = reason;
        }
    }
    report
}

/// `(n - k) / 2`, the fractional matching number of any member of ℋ(d,k)
/// on `n` vertices.
pub fn expected_fractional_matching(params: &FamilyParams, n: usize) -> Result<HalfInt, FamilyError> {
    let k = params.k;
    if n <= k || !(n - k).is_multiple_of(2) {
        return Err(FamilyError::Parity { n, k });
    }
    Ok(HalfInt::from_half_units((n - k) as i64))
}

/// `d·√(1 + 2k/(n - k))`, the spectral radius of any member of ℋ(d,k) on
/// `n` vertices.
pub fn expected_lambda1(params: &FamilyParams, n: usize) -> Result<f64, FamilyError> {
    let k = params.k;
    if n <= k {
        return Err(FamilyError::TooFewVertices { n, k });
    }
    let (d, k, n) = (params.d as f64, k as f64, n as f64);
    Ok(d * (1.0 + 2.0 * k / (n - k)).sqrt())
}
