use fracmatch_core::corpus::connected_graphs_up_to;
use fracmatch_core::matching::DEFAULT_BRUTE_FORCE_CAP;
use fracmatch_core::verify::{
    check_equality_characterization, witness_chain_for_bruteforce, LemmaCheck, Tolerances,
};

#[test]
fn small_corpus_satisfies_every_checker() {
    let tol = Tolerances::default();
    let mut chains = 0;
    for g in connected_graphs_up_to(6).into_iter().filter(|g| g.n() >= 2) {
        let check = check_equality_characterization(&g, &tol).unwrap();
        assert!(check.passed(), "{g:?}: {:?}", check.outcome);
        let r = &check.report;
        assert!(r.bound_holds, "{g:?}");
        assert!((r.bound - (r.n as f64 - r.k_star) / 2.0).abs() <= 1e-12);
        assert!(LemmaCheck::from_report(r, &tol).holds, "{g:?}");
        if let Some(chain) = witness_chain_for_bruteforce(&g, &tol, DEFAULT_BRUTE_FORCE_CAP).unwrap() {
            assert!(chain.holds(), "{g:?}: {chain:?}");
            chains += 1;
        }
    }
    assert!(chains > 0);
}
