//! Exact fractional matching numbers.
//!
//! The fractional matching polytope is half-integral, and a maximum
//! matching of the bipartite double cover has exactly twice the weight of a
//! maximum fractional matching. Folding the cover matching back onto the
//! original edges gives a certificate with weights in `{0, ½, 1}`. All
//! arithmetic is in integer half-units.
//!
//! [`max_deficiency_bruteforce`] is the independent side: it maximises
//! `i(G - S) - |S|` over every vertex subset.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 20;
/// Subsets are enumerated as `u64` masks.
pub const MAX_BRUTE_FORCE_CAP: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph has {n} vertices, brute-force cap is {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// A multiple of ½, stored as a count of half-units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_half_units(units: i64) -> Self {
        HalfInt(units)
    }

    pub const fn from_integer(x: i64) -> Self {
        HalfInt(2 * x)
    }

    pub const fn half_units(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.0)
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Edge weights in half-units (1 = ½, 2 = 1); absent edges weigh 0.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HalfIntegralMatching {
    weights: BTreeMap<(Vertex, Vertex), u8>,
    total: HalfInt,
}

impl HalfIntegralMatching {
    /// Builds a certificate from `(u, v, half_units)` triples; zero weights
    /// are dropped.
    pub fn from_weights<I>(weights: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex, u8)>,
    {
        let mut map = BTreeMap::new();
        let mut total = 0i64;
        for (u, v, w) in weights {
            if w > 0 {
                *map.entry((u.min(v), u.max(v))).or_insert(0) += w;
                total += i64::from(w);
            }
        }
        HalfIntegralMatching {
            weights: map,
            total: HalfInt(total),
        }
    }

    pub fn total(&self) -> HalfInt {
        self.total
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> u8 {
        self.weights.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, Vertex, u8)> + '_ {
        self.weights.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    /// Sum of weights at `v`, in half-units.
    pub fn load(&self, v: Vertex) -> u32 {
        self.iter()
            .filter(|&(a, b, _)| a == v || b == v)
            .map(|(_, _, w)| u32::from(w))
            .sum()
    }

    /// Every weighted pair is an edge of `g` with weight at most 1, every
    /// vertex load is at most 1, and the stored total is the exact sum.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut loads = vec![0u32; g.n()];
        let mut sum = 0i64;
        for (u, v, w) in self.iter() {
            if !g.has_edge(u, v) || w > 2 {
                return false;
            }
            loads[u] += u32::from(w);
            loads[v] += u32::from(w);
            sum += i64::from(w);
        }
        loads.iter().all(|&l| l <= 2) && sum == self.total.0
    }
}

impl Serialize for HalfIntegralMatching {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|(u, v, w)| [u, v, usize::from(w)]))
    }
}

/// Maximum matching of a bipartite graph given as left-to-right adjacency.
/// Returns the mate of each left vertex.
fn hopcroft_karp(right_n: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    const INF: usize = usize::MAX;
    let left_n = adj.len();
    let mut mate_left: Vec<Option<usize>> = vec![None; left_n];
    let mut mate_right: Vec<Option<usize>> = vec![None; right_n];
    let mut dist = vec![INF; left_n];

    loop {
        // layer the free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left_n {
            if mate_left[u].is_none() {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match mate_right[v] {
                    None => found = true,
                    Some(w) if dist[w] == INF => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            break;
        }

        // vertex-disjoint shortest augmenting paths, iterative DFS
        let mut next_edge = vec![0usize; left_n];
        for root in 0..left_n {
            if mate_left[root].is_some() {
                continue;
            }
            let mut stack = vec![root];
            while let Some(&u) = stack.last() {
                if next_edge[u] == adj[u].len() {
                    dist[u] = INF;
                    stack.pop();
                    continue;
                }
                let v = adj[u][next_edge[u]];
                next_edge[u] += 1;
                match mate_right[v] {
                    None => {
                        // augment along the stack
                        let mut v = v;
                        while let Some(u) = stack.pop() {
                            let previous = mate_left[u];
                            mate_left[u] = Some(v);
                            mate_right[v] = Some(u);
                            match previous {
                                Some(p) => v = p,
                                None => break,
                            }
                        }
                        stack.clear();
                    }
                    Some(w) if dist[w] == dist[u] + 1 => stack.push(w),
                    Some(_) => {}
                }
            }
        }
    }
    mate_left
}

/// Maximum matching of a bipartite graph (any number of components).
/// Matched edges are returned as sorted `(min, max)` pairs.
pub fn max_matching_bipartite(g: &Graph) -> Result<(usize, Vec<(Vertex, Vertex)>), MatchingError> {
    let color = g.two_coloring().ok_or(MatchingError::NotBipartite)?;
    let mut index = vec![0usize; g.n()];
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for v in 0..g.n() {
        let side = if color[v] { &mut right } else { &mut left };
        index[v] = side.len();
        side.push(v);
    }
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&u| g.neighbors(u).iter().map(|&w| index[w]).collect())
        .collect();
    let mates = hopcroft_karp(right.len(), &adj);
    let mut edges: Vec<_> = mates
        .iter()
        .enumerate()
        .filter_map(|(i, m)| m.map(|j| (left[i].min(right[j]), left[i].max(right[j]))))
        .collect();
    edges.sort_unstable();
    Ok((edges.len(), edges))
}

/// `α*_f(g)` with a half-integral certificate of the same total.
pub fn fractional_matching_number(g: &Graph) -> (HalfInt, HalfIntegralMatching) {
    let n = g.n();
    // cover: left copy v⁰ = v, right copy v¹ = v; edge {u,v} gives u⁰v¹ and v⁰u¹
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mates = hopcroft_karp(n, &adj);
    let matched = mates.iter().flatten().count();
    let certificate =
        HalfIntegralMatching::from_weights(mates.iter().enumerate().filter_map(|(u, m)| m.map(|v| (u, v, 1))));
    debug_assert_eq!(certificate.total().half_units(), matched as i64);
    (HalfInt(matched as i64), certificate)
}

pub fn has_fractional_perfect_matching(g: &Graph) -> bool {
    fractional_matching_number(g).0.half_units() == g.n() as i64
}

/// A vertex set `S` with `i(G - S)` and `def*(S) = i(G - S) - |S|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeficiencyWitness {
    pub s: VertexSet,
    pub isolated: usize,
    pub deficiency: i64,
}

impl DeficiencyWitness {
    /// Evaluates an arbitrary `S` by deleting it from `g`.
    pub fn for_set(g: &Graph, s: &VertexSet) -> Result<Self, crate::graph::GraphError> {
        let (rest, _) = g.delete_vertices(s)?;
        let isolated = rest.isolated_count();
        Ok(DeficiencyWitness {
            s: s.clone(),
            isolated,
            deficiency: isolated as i64 - s.len() as i64,
        })
    }
}

fn isolated_after(masks: &[u64], s: u64) -> u32 {
    let mut count = 0;
    for (v, &m) in masks.iter().enumerate() {
        if s >> v & 1 == 0 && m & !s == 0 {
            count += 1;
        }
    }
    count
}

/// Order of `a` and `b` as sorted vertex lists, lexicographically.
fn lex_cmp(a: u64, b: u64) -> Ordering {
    let diff = a ^ b;
    if diff == 0 {
        return Ordering::Equal;
    }
    let low = diff & diff.wrapping_neg();
    let above = !(low | (low - 1));
    // after the common prefix, the set holding `low` continues with it; the
    // other one continues with something larger or has run out
    let (holder, other, holder_first) = if a & low != 0 {
        (a, b, Ordering::Less)
    } else {
        (b, a, Ordering::Greater)
    };
    debug_assert!(holder & low != 0);
    if other & above != 0 {
        holder_first
    } else {
        holder_first.reverse()
    }
}

/// Larger deficiency, then smaller |S|, then lexicographically smaller S.
fn better(a: (i64, u64), b: (i64, u64)) -> (i64, u64) {
    let order = b
        .0
        .cmp(&a.0)
        .then(a.1.count_ones().cmp(&b.1.count_ones()))
        .then(lex_cmp(a.1, b.1));
    if order == Ordering::Greater {
        b
    } else {
        a
    }
}

/// Exhaustive maximisation of `i(G - S) - |S|` over all `2^n` subsets.
pub fn max_deficiency_bruteforce(g: &Graph, size_cap: usize) -> Result<DeficiencyWitness, MatchingError> {
    let n = g.n();
    let cap = size_cap.min(MAX_BRUTE_FORCE_CAP);
    if n > cap {
        return Err(MatchingError::TooLarge { n, cap: size_cap });
    }
    let masks = g.adjacency_masks();
    let total: u64 = 1 << n;
    let evaluate = |s: u64| -> (i64, u64) {
        // S with nothing isolated outside it is dominated by S = ∅
        (isolated_after(&masks, s) as i64 - s.count_ones() as i64, s)
    };
    let chunk: u64 = 1 << 12;
    let (deficiency, mask) = if total <= chunk {
        (0..total).map(evaluate).reduce(better).expect("at least one subset")
    } else {
        (0..total / chunk)
            .into_par_iter()
            .map(|c| {
                (c * chunk..(c + 1) * chunk)
                    .map(evaluate)
                    .reduce(better)
                    .expect("chunk is nonempty")
            })
            .reduce(|| (i64::MIN, u64::MAX), better)
    };
    let s = VertexSet::from_mask(mask);
    let isolated = (deficiency + s.len() as i64) as usize;
    Ok(DeficiencyWitness {
        s,
        isolated,
        deficiency,
    })
}

/// `α*_f(g) == ½(n - def*(g))`, both sides computed independently.
pub fn berge_tutte_crosscheck(g: &Graph, size_cap: usize) -> Result<bool, MatchingError> {
    let witness = max_deficiency_bruteforce(g, size_cap)?;
    let (value, _) = fractional_matching_number(g);
    Ok(value.half_units() == g.n() as i64 - witness.deficiency)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_ab(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn bipartite_matchings() {
        assert_eq!(max_matching_bipartite(&k_ab(3, 3)).unwrap().0, 3);
        assert_eq!(max_matching_bipartite(&Graph::path(4)).unwrap().0, 2);
        let (size, edges) = max_matching_bipartite(&k_ab(2, 3)).unwrap();
        assert_eq!(size, 2);
        assert!(edges.iter().all(|&(u, v)| u < 2 && v >= 2));
        assert_eq!(
            max_matching_bipartite(&Graph::complete(3)),
            Err(MatchingError::NotBipartite)
        );
        // disconnected bipartite input is fine
        assert_eq!(max_matching_bipartite(&Graph::empty(3)).unwrap().0, 0);
    }

    #[test]
    fn fractional_examples() {
        let c5 = Graph::cycle(5);
        let (value, cert) = fractional_matching_number(&c5);
        assert_eq!(value, HalfInt::from_half_units(5));
        assert!(cert.is_valid_for(&c5));
        for &(u, v) in c5.edges() {
            assert_eq!(cert.weight(u, v), 1);
        }

        assert_eq!(fractional_matching_number(&Graph::star(3)).0, HalfInt::from_integer(1));
        assert_eq!(fractional_matching_number(&k_ab(2, 3)).0, HalfInt::from_integer(2));
        assert_eq!(fractional_matching_number(&Graph::complete(3)).0.to_string(), "3/2");
    }

    #[test]
    fn perfect_fractional() {
        assert!(has_fractional_perfect_matching(&Graph::cycle(5)));
        assert!(!has_fractional_perfect_matching(&Graph::star(3)));
        assert!(has_fractional_perfect_matching(&Graph::petersen()));
    }

    #[test]
    fn deficiency_examples() {
        let w = max_deficiency_bruteforce(&Graph::star(3), DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!((w.s.as_slice(), w.isolated, w.deficiency), (&[0][..], 3, 2));

        let w = max_deficiency_bruteforce(&k_ab(2, 3), DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert_eq!((w.s.as_slice(), w.deficiency), (&[0, 1][..], 1));

        let w = max_deficiency_bruteforce(&Graph::cycle(4), DEFAULT_BRUTE_FORCE_CAP).unwrap();
        assert!(w.s.is_empty());
        assert_eq!(w.deficiency, 0);

        assert_eq!(
            max_deficiency_bruteforce(&Graph::empty(21), DEFAULT_BRUTE_FORCE_CAP),
            Err(MatchingError::TooLarge { n: 21, cap: 20 })
        );
    }

    #[test]
    fn lexicographic_tie_break() {
        // {0,2} < {1}? no: [0,2] < [1] lexicographically
        assert_eq!(lex_cmp(0b101, 0b010), Ordering::Less);
        assert_eq!(lex_cmp(0b010, 0b101), Ordering::Greater);
        // prefix is smaller: [0] < [0,1]
        assert_eq!(lex_cmp(0b001, 0b011), Ordering::Less);
        assert_eq!(lex_cmp(0b011, 0b001), Ordering::Greater);
        assert_eq!(lex_cmp(0b110, 0b110), Ordering::Equal);
        // [1,2] < [1,3]
        assert_eq!(lex_cmp(0b0110, 0b1010), Ordering::Less);
    }

    #[test]
    fn tie_break_prefers_small_sets() {
        // P3: S = {1} isolates both ends (def 1); no other S does better
        let w = max_deficiency_bruteforce(&Graph::path(3), 20).unwrap();
        assert_eq!(w.s.as_slice(), &[1]);
        // two disjoint edges: def 0 reached by ∅ and by many others
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let w = max_deficiency_bruteforce(&g, 20).unwrap();
        assert!(w.s.is_empty());
    }

    #[test]
    fn crosscheck_small() {
        assert!(berge_tutte_crosscheck(&Graph::star(3), 20).unwrap());
        assert!(berge_tutte_crosscheck(&Graph::cycle(5), 20).unwrap());
        assert!(berge_tutte_crosscheck(&Graph::petersen(), 20).unwrap());
    }

    #[test]
    fn witness_for_arbitrary_set() {
        let s = VertexSet::new(vec![0, 1]).unwrap();
        let w = DeficiencyWitness::for_set(&k_ab(2, 3), &s).unwrap();
        assert_eq!((w.isolated, w.deficiency), (3, 1));
    }

    #[test]
    fn certificate_rejects_overload() {
        let star = Graph::star(3);
        let bad = HalfIntegralMatching::from_weights([(0, 1, 2), (0, 2, 1)]);
        assert!(!bad.is_valid_for(&star));
        let not_edge = HalfIntegralMatching::from_weights([(1, 2, 1)]);
        assert!(!not_edge.is_valid_for(&star));
    }
}
