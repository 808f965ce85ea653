//! Simple undirected graphs on dense vertex ids `0..n`.
//!
//! Everything downstream (spectra, matchings, families, checkers) works on
//! [`Graph`]. The canonical on-disk form is the edge-list text format handled
//! by [`parse_edge_list`] and [`serialize_edge_list`]:
//!
//! ```text
//! n m
//! u v
//! ...
//! ```
//!
//! Decimal ASCII, single spaces, LF line endings, edges sorted by
//! `(min endpoint, max endpoint)`.

use std::collections::VecDeque;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {0} listed twice")]
    DuplicateVertex(Vertex),
    #[error("graph is not connected")]
    Disconnected,
    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),
}

/// Parse failure; every variant names the 1-based line it was found on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed line {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("line {line}: header announced {expected} edges, found {found}")]
    EdgeCountMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
}

/// Undirected simple graph. Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    /// Sorted, each pair stored as `(min, max)`.
    edges: Vec<(Vertex, Vertex)>,
    /// Sorted neighbour lists.
    adj: Vec<Vec<Vertex>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph, rejecting loops, duplicates and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_sorted_unchecked(n, list))
    }

    fn from_sorted_unchecked(n: usize, edges: Vec<(Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_sorted_unchecked(n, edges)
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_sorted_unchecked(n, edges)
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        edges.sort_unstable();
        Self::from_sorted_unchecked(n, edges)
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Self::from_sorted_unchecked(leaves + 1, (1..=leaves).map(|v| (0, v)).collect())
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Self::from_edges(10, edges).expect("petersen graph is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.adj
            .get(v)
            .map(Vec::len)
            .ok_or(GraphError::VertexOutOfRange { vertex: v, n: self.n })
    }

    /// Minimum degree; 0 for the graph on no vertices.
    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut members = vec![root];
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        members.push(w);
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(VertexSet { members });
        }
        out
    }

    /// The graph on zero vertices counts as connected.
    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn isolated_count(&self) -> usize {
        self.adj.iter().filter(|a| a.is_empty()).count()
    }

    /// Induced subgraph on `V \ s`. Returns the new graph and, for each new
    /// vertex id, the id it had in `self`.
    pub fn delete_vertices(&self, s: &VertexSet) -> Result<(Graph, Vec<Vertex>), GraphError> {
        s.check_within(self.n)?;
        let mut removed = vec![false; self.n];
        for &v in s.iter() {
            removed[v] = true;
        }
        let kept: Vec<Vertex> = (0..self.n).filter(|&v| !removed[v]).collect();
        Ok((self.induced_by_ids(&kept), kept))
    }

    /// Induced subgraph on `keep`; vertex `i` of the result is `keep[i]`.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<Graph, GraphError> {
        keep.check_within(self.n)?;
        Ok(self.induced_by_ids(&keep.members))
    }

    fn induced_by_ids(&self, kept: &[Vertex]) -> Graph {
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in kept.iter().enumerate() {
            new_id[v] = i;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_id[u] != usize::MAX && new_id[v] != usize::MAX)
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        // relabeling preserves order, so endpoints stay (min, max) but the
        // lexicographic order of pairs does too
        Self::from_sorted_unchecked(kept.len(), edges)
    }

    /// `true` iff every edge of `self` is an edge of `other` and both have
    /// the same vertex count.
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges.iter().all(|&(u, v)| other.has_edge(u, v))
    }

    /// Proper 2-colouring of every component (colour of each component's
    /// smallest vertex is `false`), or `None` if an odd cycle exists.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for root in 0..self.n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(false);
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].expect("queued vertices are coloured");
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    /// Unique bipartition of a connected graph, the side holding vertex 0
    /// first; `Ok(None)` when the graph has an odd cycle.
    pub fn bipartition(&self) -> Result<Option<Bipartition>, GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(self.two_coloring().map(|color| {
            let (a, b): (Vec<Vertex>, Vec<Vertex>) = (0..self.n).partition(|&v| !color[v]);
            Bipartition {
                side_a: VertexSet { members: a },
                side_b: VertexSet { members: b },
            }
        }))
    }

    /// Graph on `2n` vertices: `v` is copy `v⁰`, `n + v` is copy `v¹`; each
    /// edge `{u, v}` becomes `{u⁰, v¹}` and `{v⁰, u¹}`.
    pub fn bipartite_double_cover(&self) -> Graph {
        let n = self.n;
        let mut edges = Vec::with_capacity(2 * self.edges.len());
        for &(u, v) in &self.edges {
            edges.push((u, n + v));
            edges.push((v, n + u));
        }
        edges.sort_unstable();
        Self::from_sorted_unchecked(2 * n, edges)
    }

    /// Edge set as a bitmask per vertex. Only meaningful for `n <= 64`.
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        debug_assert!(self.n <= 64);
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &w| m | (1 << w)))
            .collect()
    }
}

/// Sorted set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
#[serde(transparent)]
pub struct VertexSet {
    members: Vec<Vertex>,
}

impl VertexSet {
    /// Sorts the input; duplicates are an error.
    pub fn new(mut members: Vec<Vertex>) -> Result<Self, GraphError> {
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        Ok(VertexSet { members })
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet {
            members: (0..64).filter(|&v| mask >> v & 1 == 1).collect(),
        }
    }

    pub fn all(n: usize) -> Self {
        VertexSet {
            members: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vertex> + '_ {
        self.members.iter()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.members
    }

    pub fn check_within(&self, n: usize) -> Result<(), GraphError> {
        match self.members.last() {
            Some(&v) if v >= n => Err(GraphError::VertexOutOfRange { vertex: v, n }),
            _ => Ok(()),
        }
    }
}

impl From<VertexSet> for Vec<Vertex> {
    fn from(s: VertexSet) -> Self {
        s.members
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bipartition {
    pub side_a: VertexSet,
    pub side_b: VertexSet,
}

impl Bipartition {
    pub fn swapped(self) -> Self {
        Bipartition {
            side_a: self.side_b,
            side_b: self.side_a,
        }
    }

    pub fn cells(&self) -> Vec<VertexSet> {
        vec![self.side_a.clone(), self.side_b.clone()]
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let text = text.strip_suffix('\n').unwrap_or(text);
    let mut lines = text.split('\n').enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().expect("split yields at least one item");
    let (n, m) = parse_pair(1, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (line, text) in lines {
        let (u, v) = parse_pair(line, text)?;
        for vertex in [u, v] {
            if vertex >= n {
                return Err(ParseError::VertexOutOfRange { line, vertex, n });
            }
        }
        if u == v {
            return Err(ParseError::Loop { line, vertex: u });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(ParseError::DuplicateEdge { line, u, v });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            line: edges.len() + 1,
            expected: m,
            found: edges.len(),
        });
    }
    Ok(Graph::from_edges(n, edges).expect("edges validated above"))
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), ParseError> {
    let malformed = || ParseError::Malformed {
        line,
        text: text.to_string(),
    };
    let (a, b) = text.split_once(' ').ok_or_else(malformed)?;
    let number = |s: &str| {
        if s.is_empty() || !s.bytes().all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        s.parse::<usize>().map_err(|_| malformed())
    };
    Ok((number(a)?, number(b)?))
}

/// Canonical text form, no trailing newline.
pub fn serialize_edge_list(g: &Graph) -> String {
    use std::fmt::Write;
    let mut out = format!("{} {}", g.n, g.edges.len());
    for &(u, v) in &g.edges {
        write!(out, "\n{u} {v}").expect("writing to a String cannot fail");
    }
    out
}

/// Connected graph on `n` vertices with minimum degree at least `d`,
/// deterministic in `(n, d, seed)`.
///
/// A uniform spanning tree is drawn with the Aldous–Broder walk on `K_n`;
/// then, while some vertex has degree below `d`, one such vertex is picked
/// uniformly and joined to a uniform non-neighbour.
pub fn random_connected_min_degree(n: usize, d: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 || n < d + 1 {
        return Err(GraphError::Infeasible(format!(
            "need n >= d + 1 and n >= 1, got n = {n}, d = {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    let mut edges = Vec::new();
    let mut add = |u: usize, v: usize, adj: &mut Vec<Vec<bool>>, deg: &mut Vec<usize>| {
        adj[u][v] = true;
        adj[v][u] = true;
        deg[u] += 1;
        deg[v] += 1;
        edges.push((u, v));
    };

    let mut visited = vec![false; n];
    let mut current = rng.gen_range(0..n);
    visited[current] = true;
    let mut remaining = n - 1;
    while remaining > 0 {
        let mut next = rng.gen_range(0..n - 1);
        if next >= current {
            next += 1;
        }
        if !visited[next] {
            visited[next] = true;
            remaining -= 1;
            add(current, next, &mut adj, &mut deg);
        }
        current = next;
    }

    loop {
        let deficient: Vec<usize> = (0..n).filter(|&v| deg[v] < d).collect();
        let Some(&u) = deficient.choose(&mut rng) else {
            break;
        };
        let candidates: Vec<usize> = (0..n).filter(|&w| w != u && !adj[u][w]).collect();
        // deg[u] < d <= n - 1 leaves at least one non-neighbour
        let &w = candidates
            .choose(&mut rng)
            .expect("deficient vertex has a non-neighbour");
        add(u, w, &mut adj, &mut deg);
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k23() -> Graph {
        Graph::from_edges(5, (0..2).flat_map(|a| (2..5).map(move |b| (a, b)))).unwrap()
    }

    #[test]
    fn parses_triangle_and_edge() {
        let g = parse_edge_list("3 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(g, Graph::complete(3));
        let g = parse_edge_list("2 1\n0 1").unwrap();
        assert_eq!(g, Graph::complete(2));
    }

    #[test]
    fn parse_errors_name_their_line() {
        assert_eq!(
            parse_edge_list("3 1\n0 0"),
            Err(ParseError::Loop { line: 2, vertex: 0 })
        );
        assert_eq!(
            parse_edge_list("3 2\n0 1\n1 0"),
            Err(ParseError::DuplicateEdge { line: 3, u: 1, v: 0 })
        );
        assert_eq!(
            parse_edge_list("3 1\n0 3"),
            Err(ParseError::VertexOutOfRange { line: 2, vertex: 3, n: 3 })
        );
        assert!(matches!(
            parse_edge_list("3 1\n0  1"),
            Err(ParseError::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 x"),
            Err(ParseError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 2\n0 1"),
            Err(ParseError::EdgeCountMismatch { expected: 2, found: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 1\n1 2"),
            Err(ParseError::EdgeCountMismatch { expected: 1, found: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\r\n0 1"),
            Err(ParseError::Malformed { line: 1, .. })
        ));
    }

    #[test]
    fn serializes_canonically() {
        assert_eq!(serialize_edge_list(&Graph::complete(2)), "2 1\n0 1");
        assert_eq!(serialize_edge_list(&Graph::empty(3)), "3 0");
        let g = Graph::from_edges(4, [(3, 1), (2, 0), (1, 0)]).unwrap();
        assert_eq!(serialize_edge_list(&g), "4 3\n0 1\n0 2\n1 3");
    }

    #[test]
    fn degrees() {
        let g = k23();
        for v in 2..5 {
            assert_eq!(g.degree(v), Ok(2));
        }
        assert_eq!(Graph::empty(1).degree(0), Ok(0));
        assert_eq!(Graph::complete(6).degree(4), Ok(5));
        assert_eq!(Graph::complete(6).min_degree(), 5);
        assert_eq!(
            g.degree(5),
            Err(GraphError::VertexOutOfRange { vertex: 5, n: 5 })
        );
    }

    #[test]
    fn components_and_isolated() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.components().len(), 2);
        assert_eq!(g.isolated_count(), 1);

        let star = Graph::star(3);
        let (leaves, map) = star.delete_vertices(&VertexSet::new(vec![0]).unwrap()).unwrap();
        assert_eq!(leaves, Graph::empty(3));
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(leaves.components().len(), 3);
        assert_eq!(leaves.isolated_count(), 3);

        let c6 = Graph::cycle(6);
        assert!(c6.is_connected());
        assert_eq!(c6.isolated_count(), 0);
    }

    #[test]
    fn deleting_vertices() {
        let c5 = Graph::cycle(5);
        let (p4, map) = c5.delete_vertices(&VertexSet::new(vec![2]).unwrap()).unwrap();
        assert_eq!(map, vec![0, 1, 3, 4]);
        // relabelled: 0-1, 2-3, 3-0 is a path 1-0-3-2
        assert_eq!(p4.edge_count(), 3);
        assert!(p4.is_connected());
        assert_eq!(p4.max_degree(), 2);

        let (same, _) = c5.delete_vertices(&VertexSet::default()).unwrap();
        assert_eq!(same, c5);
        assert!(c5.delete_vertices(&VertexSet::new(vec![5]).unwrap()).is_err());
    }

    #[test]
    fn bipartitions() {
        let c6 = Graph::cycle(6);
        let bp = c6.bipartition().unwrap().unwrap();
        assert_eq!(bp.side_a.as_slice(), &[0, 2, 4]);
        assert_eq!(bp.side_b.as_slice(), &[1, 3, 5]);

        assert_eq!(Graph::complete(3).bipartition(), Ok(None));

        let bp = k23().bipartition().unwrap().unwrap();
        assert_eq!(bp.side_a.len(), 2);
        assert_eq!(bp.side_b.len(), 3);

        assert_eq!(Graph::empty(2).bipartition(), Err(GraphError::Disconnected));
    }

    #[test]
    fn double_covers() {
        let k2 = Graph::complete(2).bipartite_double_cover();
        assert_eq!(k2.edge_count(), 2);
        assert_eq!(k2.components().len(), 2);

        let c6 = Graph::complete(3).bipartite_double_cover();
        assert!(c6.is_connected());
        assert_eq!(c6.n(), 6);
        assert!((0..6).all(|v| c6.degree(v) == Ok(2)));

        let two_c4 = Graph::cycle(4).bipartite_double_cover();
        let comps = two_c4.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 4));
    }

    #[test]
    fn random_generator_contract() {
        for seed in 0..5 {
            assert_eq!(random_connected_min_degree(4, 3, seed).unwrap(), Graph::complete(4));
        }
        assert_eq!(
            random_connected_min_degree(10, 2, 7).unwrap(),
            random_connected_min_degree(10, 2, 7).unwrap()
        );
        let g = random_connected_min_degree(10, 3, 1).unwrap();
        assert!(g.min_degree() >= 3);
        assert!(g.is_connected());
        assert!(random_connected_min_degree(3, 3, 0).is_err());
        assert_eq!(random_connected_min_degree(1, 0, 0).unwrap(), Graph::empty(1));
    }

    #[test]
    fn petersen_is_cubic() {
        let p = Graph::petersen();
        assert_eq!(p.edge_count(), 15);
        assert!((0..10).all(|v| p.degree(v) == Ok(3)));
        assert!(p.is_connected());
        assert!(p.two_coloring().is_none());
    }
}
