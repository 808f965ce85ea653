//! Exhaustive enumeration of small graphs up to isomorphism.
//!
//! Graphs on `n` vertices are produced by attaching a new vertex to every
//! graph on `n - 1` vertices in every possible way and keeping one
//! representative per canonical form. The canonical form is the smallest
//! upper-triangle adjacency code over all vertex orders compatible with a
//! colour-refinement partition.

use std::collections::HashSet;

use crate::graph::Graph;

/// Largest order supported; the upper triangle must fit in a `u64`.
pub const MAX_ORDER: usize = 11;

/// Stable colour refinement starting from degrees. Colours are ranks of
/// isomorphism-invariant signatures, so equal graphs get equal colourings
/// up to relabelling.
fn refine(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut classes = 0;
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = g.neighbors(v).iter().map(|&w| color[w]).collect();
                around.sort_unstable();
                (color[v], around)
            })
            .collect();
        let mut distinct = signatures.clone();
        distinct.sort();
        distinct.dedup();
        color = signatures
            .iter()
            .map(|s| distinct.binary_search(s).expect("signature present"))
            .collect();
        if distinct.len() == classes {
            return color;
        }
        classes = distinct.len();
    }
}

fn code(g: &Graph, order: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut bit = 0;
    for j in 1..order.len() {
        for i in 0..j {
            if g.has_edge(order[i], order[j]) {
                out |= 1 << bit;
            }
            bit += 1;
        }
    }
    out
}

/// Canonical code: equal for two graphs iff they are isomorphic.
pub fn canonical_code(g: &Graph) -> u64 {
    assert!(g.n() <= MAX_ORDER, "canonical codes need n <= {MAX_ORDER}");
    let color = refine(g);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_color: Vec<usize> = (0..g.n()).collect();
    by_color.sort_by_key(|&v| color[v]);
    for v in by_color {
        match classes.last_mut() {
            Some(class) if color[class[0]] == color[v] => class.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(g.n());
    search(g, &mut classes, 0, 0, &mut order, &mut best);
    best
}

fn search(
    g: &Graph,
    classes: &mut [Vec<usize>],
    class: usize,
    pos: usize,
    order: &mut Vec<usize>,
    best: &mut u64,
) {
    if class == classes.len() {
        *best = (*best).min(code(g, order));
        return;
    }
    if pos == classes[class].len() {
        search(g, classes, class + 1, 0, order, best);
        return;
    }
    // permutations of the current class by swapping
    for i in pos..classes[class].len() {
        classes[class].swap(pos, i);
        order.push(classes[class][pos]);
        search(g, classes, class, pos + 1, order, best);
        order.pop();
        classes[class].swap(pos, i);
    }
}

/// One graph per isomorphism class on exactly `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= MAX_ORDER);
    if n == 0 {
        return vec![Graph::empty(0)];
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for base in all_graphs(n - 1) {
        let new = n - 1;
        for neighbourhood in 0u64..1 << new {
            let mut edges = base.edges().to_vec();
            edges.extend((0..new).filter(|&v| neighbourhood >> v & 1 == 1).map(|v| (v, new)));
            let g = Graph::from_edges(n, edges).expect("extension stays simple");
            if seen.insert(canonical_code(&g)) {
                out.push(g);
            }
        }
    }
    out
}

/// Connected graphs on exactly `n` vertices, one per isomorphism class.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(Graph::is_connected).collect()
}

/// Connected graphs on `1..=n_max` vertices.
pub fn connected_graphs_up_to(n_max: usize) -> Vec<Graph> {
    (1..=n_max).flat_map(connected_graphs).collect()
}
