use fracmatch_core::families::{
    expected_fractional_matching, expected_lambda1, gen_complete_bipartite, gen_ring_blocks,
    membership_report, FamilyParams,
};
use fracmatch_core::matching::fractional_matching_number;
use fracmatch_core::spectral::{is_equitable, quotient_lambda1, quotient_matrix, spectral_radius, DEFAULT_TOL};
use fracmatch_core::verify::{check_equality_characterization, check_theorem_bound, EqualityOutcome, Tolerances};
use proptest::prelude::*;

fn check_member(g: &fracmatch_core::Graph, params: &FamilyParams) -> Result<(), TestCaseError> {
    let report = membership_report(g);
    prop_assert!(report.is_member, "{:?}", report.failure_reason);
    prop_assert_eq!(report.d_found, Some(params.d));
    prop_assert_eq!(report.k_found, Some(params.k));

    let n = g.n();
    prop_assert_eq!(fractional_matching_number(g).0, expected_fractional_matching(params, n).unwrap());

    let expected = expected_lambda1(params, n).unwrap();
    let est = spectral_radius(g, DEFAULT_TOL).unwrap();
    prop_assert!((est.value - expected).abs() <= DEFAULT_TOL + est.residual);

    let bp = report.bipartition.unwrap();
    let cells = bp.cells();
    prop_assert!(is_equitable(g, &cells).unwrap());
    let q = quotient_matrix(g, &cells).unwrap();
    let (a, b) = (bp.side_a.len() as f64, bp.side_b.len() as f64);
    let d = params.d as f64;
    let closed = (d * (d * a / b)).sqrt();
    prop_assert!((quotient_lambda1(&q) - closed).abs() <= 1e-12);
    prop_assert!((closed - expected).abs() <= 1e-12);

    let tol = Tolerances::default();
    let r = check_theorem_bound(g, &tol).unwrap();
    prop_assert!(r.equality_flag && r.bound_holds);
    let c = check_equality_characterization(g, &tol).unwrap();
    if params.k >= 1 {
        prop_assert_eq!(c.outcome, EqualityOutcome::EqualityMember { k: params.k });
    } else {
        prop_assert_eq!(c.outcome, EqualityOutcome::RegularCase { is_member: true });
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn ring_members(d in 2usize..6, m in 1usize..5, c in 1usize..6) {
        let g = gen_ring_blocks(d, m, c).unwrap();
        prop_assert_eq!(g.n(), c * (2 * d + m));
        let params = FamilyParams::ring(d, m, c).unwrap();
        check_member(&g, &params)?;
        let bp = membership_report(&g).bipartition.unwrap();
        prop_assert!(bp.side_b.iter().all(|&v| g.neighbors(v).len() == d + m));
    }

    #[test]
    fn complete_bipartite_members(d in 1usize..7, k in 0usize..6) {
        let g = gen_complete_bipartite(d, d + k).unwrap();
        check_member(&g, &FamilyParams::new(d, k).unwrap())?;
    }
}

#[test]
fn single_block_ring_is_complete_bipartite() {
    for d in 1..5 {
        for m in 1..4 {
            assert_eq!(
                gen_ring_blocks(d, m, 1).unwrap(),
                gen_complete_bipartite(d, d + m).unwrap()
            );
        }
    }
}
