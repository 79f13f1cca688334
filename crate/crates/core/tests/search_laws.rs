mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempex_core::model::ONE;
use tempex_core::oracle::brute_force_reach;
use tempex_core::search::{dfs_order, next_vertex, nu_exact, temporal_dfs};
use tempex_core::{TemporalWindow, VertexSet};

fn nested_sets(n: usize, v: usize, rng: &mut ChaCha8Rng) -> (VertexSet, VertexSet) {
    let mut others: Vec<usize> = (1..=n).filter(|&u| u != v).collect();
    others.shuffle(rng);
    let big = rng.gen_range(0..others.len());
    let small = rng.gen_range(0..=big);
    let d = VertexSet::from_vertices(n, std::iter::once(v).chain(others[..small].iter().copied()));
    let d2 = VertexSet::from_vertices(n, std::iter::once(v).chain(others[..big].iter().copied()));
    (d, d2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn discovery_grows_by_one(n in 1usize..12, count in 1usize..6, cat in any::<u64>(), seed in any::<u64>(), t in 0usize..20, v in 1usize..12) {
        let model = common::catalog(n, count, cat);
        let v = (v - 1) % n + 1;
        let w = TemporalWindow::materialize(&model, seed, 1, t as u64).unwrap();
        let d = temporal_dfs(&w, v, t).unwrap();
        prop_assert_eq!(d.visited.len(), (1 + t).min(n));
        if n <= 12 && t > 0 {
            prop_assert!(d.visited.is_subset(&brute_force_reach(&w, v, t as u64).unwrap()));
        }
    }

    #[test]
    fn next_vertex_is_first_outside_in_preorder(n in 2usize..10, cat in any::<u64>(), pick in any::<u64>()) {
        let model = common::catalog(n, 3, cat);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let v = rng.gen_range(1..=n);
        let (d, _) = nested_sets(n, v, &mut rng);
        for tree in model.trees() {
            let order = dfs_order(tree, v);
            let expected = order.order.iter().copied().find(|&u| !d.contains(u));
            prop_assert_eq!(next_vertex(v, &d, tree).unwrap(), expected);
            if let Some(u) = expected {
                // every vertex before u in preorder is already discovered, and u touches D
                prop_assert!(tree.neighbors(u).iter().any(|&x| d.contains(x)));
            }
        }
    }

    #[test]
    fn nu_is_a_law_on_undiscovered_vertices(n in 2usize..10, count in 1usize..8, cat in any::<u64>(), pick in any::<u64>()) {
        let model = common::catalog(n, count, cat);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let v = rng.gen_range(1..=n);
        let (d, d2) = nested_sets(n, v, &mut rng);
        let nu = nu_exact(&model, v, &d).unwrap();
        let nu2 = nu_exact(&model, v, &d2).unwrap();
        prop_assert_eq!(nu.mass.iter().sum::<u64>(), ONE);
        for u in 1..=n {
            if d.contains(u) {
                prop_assert_eq!(nu.mass[u], 0);
            }
            if !d2.contains(u) {
                prop_assert!(nu.mass[u] <= nu2.mass[u]);
            }
        }
        prop_assert!(2 * nu.good_mass() >= ONE);
    }
}
