#![allow(dead_code)]

use fracmatch_core::Graph;
use proptest::prelude::*;

/// Random simple graph on 1..=max_n vertices.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

pub fn arb_connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 1usize..4, any::<u64>()).prop_map(|(n, d, seed)| {
        let d = d.min(n - 1);
        fracmatch_core::graph::random_connected_min_degree(n, d, seed).unwrap()
    })
}

/// Maximum matching size by exhaustive recursion over edges.
pub fn brute_force_matching(g: &Graph) -> usize {
    fn go(edges: &[(usize, usize)], used: u64) -> usize {
        match edges.split_first() {
            None => 0,
            Some((&(u, v), rest)) => {
                let skip = go(rest, used);
                if used >> u & 1 == 0 && used >> v & 1 == 0 {
                    skip.max(1 + go(rest, used | 1 << u | 1 << v))
                } else {
                    skip
                }
            }
        }
    }
    go(g.edges(), 0)
}

/// Whether some closed walk of odd length exists, by reachability over
/// (vertex, walk parity) states.
pub fn has_odd_closed_walk(g: &Graph) -> bool {
    let n = g.n();
    (0..n).any(|start| {
        let mut seen = vec![[false; 2]; n];
        seen[start][0] = true;
        let mut stack = vec![(start, 0usize)];
        while let Some((u, p)) = stack.pop() {
            for &w in g.neighbors(u) {
                let q = 1 - p;
                if !seen[w][q] {
                    seen[w][q] = true;
                    stack.push((w, q));
                }
            }
        }
        seen[start][1]
    })
}
