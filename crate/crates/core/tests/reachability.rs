mod common;

use proptest::prelude::*;
use tempex_core::oracle::brute_force_reach;
use tempex_core::reach::{earliest_arrival, foremost_walk};
use tempex_core::{validate_walk, TemporalWindow, VertexSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arrival_matches_brute_force(n in 2usize..8, count in 1usize..6, cat in any::<u64>(), seed in any::<u64>(), len in 1u64..12, s in 1usize..8) {
        let model = common::catalog(n, count, cat);
        let source = (s - 1) % n + 1;
        let w = TemporalWindow::materialize(&model, seed, 1, len).unwrap();
        let map = earliest_arrival(&w, &VertexSet::from_vertices(n, [source]), 1).unwrap();
        let mut previous = VertexSet::empty(n);
        for t in 0..=len {
            let reached = map.reached_by(t);
            prop_assert_eq!(&reached, &brute_force_reach(&w, source, t).unwrap());
            prop_assert!(previous.is_subset(&reached));
            previous = reached;
        }
    }

    #[test]
    fn everything_reached_within_n_minus_one(n in 2usize..10, count in 1usize..6, cat in any::<u64>(), seed in any::<u64>(), s in 1usize..10, t0 in 1u64..20) {
        let model = common::catalog(n, count, cat);
        let source = (s - 1) % n + 1;
        let w = TemporalWindow::materialize(&model, seed, t0, t0 + n as u64 - 2).unwrap();
        let map = earliest_arrival(&w, &VertexSet::from_vertices(n, [source]), t0).unwrap();
        prop_assert_eq!(map.reached_count(), n);
    }

    #[test]
    fn reversal_swaps_direction(n in 2usize..7, count in 1usize..5, cat in any::<u64>(), seed in any::<u64>(), len in 1u64..10) {
        let model = common::catalog(n, count, cat);
        let w = TemporalWindow::materialize(&model, seed, 1, len).unwrap();
        let r = w.reverse();
        for u in 1..=n {
            let forward = earliest_arrival(&w, &VertexSet::from_vertices(n, [u]), 1).unwrap();
            for v in 1..=n {
                let backward = earliest_arrival(&r, &VertexSet::from_vertices(n, [v]), 1).unwrap();
                prop_assert_eq!(forward.get(v).is_some(), backward.get(u).is_some());
            }
        }
    }

    #[test]
    fn foremost_walks_arrive_on_time(n in 2usize..9, count in 1usize..6, cat in any::<u64>(), seed in any::<u64>(), len in 1u64..15) {
        let model = common::catalog(n, count, cat);
        let w = TemporalWindow::materialize(&model, seed, 1, len).unwrap();
        let map = earliest_arrival(&w, &VertexSet::from_vertices(n, [1]), 1).unwrap();
        for v in 1..=n {
            let walk = foremost_walk(&w, 1, v, 1).unwrap();
            prop_assert_eq!(walk.is_some(), map.get(v).is_some());
            if let Some(walk) = walk {
                let report = validate_walk(&w, &walk, &VertexSet::from_vertices(n, [v]));
                prop_assert!(report.valid);
                prop_assert_eq!(report.arrival, map.get(v));
                prop_assert_eq!(walk.current(), v);
            }
        }
    }
}
