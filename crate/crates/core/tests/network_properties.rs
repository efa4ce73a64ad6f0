mod common;

use d2d_core::allocation::{build_estimated_graph, cellular_assignment, cluster_by_replicated_matching};
use d2d_core::experiment::{ScenarioConfig, TABLE1_CELLULAR_CHANNELS, TABLE1_SCENARIO_JSON};
use d2d_core::network::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cellular_sum_exceeds_lower_bound(seed in 0u64..1_000_000, l in 1usize..=8, k in 1usize..=8,
                                        choice in proptest::collection::vec(0usize..2, 8)) {
        let s = common::scenario(seed, l, k, &[2.0, 4.0], 0.1);
        let cell = cellular_assignment(&s).unwrap().row_to_col;
        let b = cluster_by_replicated_matching(&build_estimated_graph(&s).unwrap()).unwrap();
        let alloc = b.to_channel_allocation(&cell);
        let powers: Vec<f64> = (0..k).map(|i| s.power.levels[choice[i]]).collect();
        let u = aggregate_utility(&s, &alloc, &powers).unwrap();
        prop_assert!(u.cellular_sum() > cellular_lower_bound(&s, &alloc).unwrap());
    }

    #[test]
    fn gains_are_reciprocal_and_in_range(seed in 0u64..1_000_000, l in 1usize..=4, k in 0usize..=4) {
        let s = common::scenario(seed, l, k, &[2.0, 4.0], 0.1);
        let g = s.gains();
        prop_assert!(g.check_ranges());
        let n = g.nodes();
        for u in 0..n {
            for v in 0..n {
                if u == v { continue; }
                for q in 0..l {
                    let (a, b) = (NodeId(u), NodeId(v));
                    prop_assert_eq!(g.gain(a, b, q), g.gain(b, a, q));
                    prop_assert!((g.gain(a, b, q) - g.fading(a, b, q) * g.pathloss(a, b)).abs() < 1e-15);
                }
            }
        }
    }
}

#[test]
fn reference_network_cellular_assignment() {
    let s = ScenarioConfig::from_json(TABLE1_SCENARIO_JSON).unwrap().build().unwrap();
    assert_eq!(s.d2d_count(), 12);
    let m = cellular_assignment(&s).unwrap();
    assert_eq!(m.row_to_col, TABLE1_CELLULAR_CHANNELS.to_vec());
    // C3 on channel 2 without sharers
    assert!((s.cellular_utility(2, 1, &[]).unwrap() - 1.169_381_36).abs() < 1e-8);
}
