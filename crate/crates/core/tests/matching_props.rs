mod common;

use common::{arb_graph, brute_force_matching};
use fracmatch_core::corpus::connected_graphs_up_to;
use fracmatch_core::matching::{
    berge_tutte_crosscheck, fractional_matching_number, has_fractional_perfect_matching,
    max_deficiency_bruteforce, max_matching_bipartite, DeficiencyWitness, DEFAULT_BRUTE_FORCE_CAP,
};
use fracmatch_core::{Graph, VertexSet};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn certificates_are_valid(g in arb_graph(12)) {
        let (value, cert) = fractional_matching_number(&g);
        prop_assert!(cert.is_valid_for(&g));
        prop_assert_eq!(cert.total(), value);
        prop_assert!(cert.iter().all(|(_, _, w)| w <= 2));
        prop_assert!(value.half_units() <= g.n() as i64);
        prop_assert_eq!(value.half_units() == g.n() as i64, has_fractional_perfect_matching(&g));
    }

    #[test]
    fn duality_sandwich(g in arb_graph(9)) {
        let (value, _) = fractional_matching_number(&g);
        let best = max_deficiency_bruteforce(&g, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        for mask in 0u64..1 << g.n() {
            let w = DeficiencyWitness::for_set(&g, &VertexSet::from_mask(mask)).unwrap();
            // ½(n - def*(S)) >= α*_f, in half-units
            prop_assert!(g.n() as i64 - w.deficiency >= value.half_units());
            prop_assert!(w.deficiency <= best.deficiency);
        }
        prop_assert_eq!(g.n() as i64 - best.deficiency, value.half_units());
        let again = DeficiencyWitness::for_set(&g, &best.s).unwrap();
        prop_assert_eq!(again, best);
    }

    #[test]
    fn bipartite_matching_is_maximum(g in arb_graph(10)) {
        match max_matching_bipartite(&g) {
            Ok((size, edges)) => {
                prop_assert_eq!(size, brute_force_matching(&g));
                prop_assert_eq!(edges.len(), size);
                let mut used = vec![false; g.n()];
                for (u, v) in edges {
                    prop_assert!(g.has_edge(u, v));
                    prop_assert!(!used[u] && !used[v]);
                    used[u] = true;
                    used[v] = true;
                }
                // α*_f >= α'
                prop_assert!(fractional_matching_number(&g).0.half_units() >= 2 * size as i64);
            }
            Err(_) => prop_assert!(g.two_coloring().is_none()),
        }
    }

    #[test]
    fn adding_an_edge_never_decreases(g in arb_graph(10), pick in any::<usize>()) {
        let missing: Vec<(usize, usize)> = (0..g.n())
            .flat_map(|u| (u + 1..g.n()).map(move |v| (u, v)))
            .filter(|&(u, v)| !g.has_edge(u, v))
            .collect();
        prop_assume!(!missing.is_empty());
        let mut edges = g.edges().to_vec();
        edges.push(missing[pick % missing.len()]);
        let bigger = Graph::from_edges(g.n(), edges).unwrap();
        prop_assert!(fractional_matching_number(&bigger).0 >= fractional_matching_number(&g).0);
    }
}

#[test]
fn crosscheck_on_small_connected_graphs() {
    for g in connected_graphs_up_to(6) {
        assert!(berge_tutte_crosscheck(&g, DEFAULT_BRUTE_FORCE_CAP).unwrap(), "{g:?}");
    }
}

#[test]
fn regular_graphs_have_fractional_perfect_matchings() {
    for g in connected_graphs_up_to(7) {
        if g.n() >= 2 && g.min_degree() == g.max_degree() {
            assert!(has_fractional_perfect_matching(&g), "{g:?}");
            let w = max_deficiency_bruteforce(&g, DEFAULT_BRUTE_FORCE_CAP).unwrap();
            assert_eq!(w.deficiency, 0);
        }
    }
    assert!(has_fractional_perfect_matching(&Graph::petersen()));
}

#[test]
fn ring_member_value() {
    let g = fracmatch_core::families::gen_ring_blocks(2, 1, 3).unwrap();
    assert_eq!(fractional_matching_number(&g).0.to_string(), "12/2");
}
