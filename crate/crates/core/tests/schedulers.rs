mod common;

use proptest::prelude::*;
use tempex_core::models::{half_stars, ladder_model, star_catalog};
use tempex_core::oracle::{texp, StartMode};
use tempex_core::schedulers::{
    build_backbone_plan, build_meta_graph, greedy_schedule, linear_schedule, meta_graph_schedule, policy_by_name,
    run_online, star_two_phase, LegKind, Schedule,
};
use tempex_core::search::{estimate_closeness, ClosenessGraph};
use tempex_core::{validate_walk, Model, TemporalWindow, VertexSet};

const MAX_TIME: u64 = 5_000_000;

fn check(model: &Model, seed: u64, s: &Schedule) -> Result<(), TestCaseError> {
    let n = model.n();
    let w = TemporalWindow::materialize(model, seed, 1, s.arrival).unwrap();
    let r = validate_walk(&w, &s.walk, &VertexSet::full(n));
    prop_assert!(r.valid, "invalid at {:?}", r.invalid_at);
    prop_assert_eq!(r.arrival, Some(s.arrival));
    if n <= 8 && s.arrival > 0 {
        let exact = texp(&w, StartMode::Best).unwrap();
        prop_assert!(exact.per_start[s.start].is_some_and(|v| v <= s.arrival));
        prop_assert!(exact.value.is_some_and(|v| v <= s.arrival));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn offline_schedules_are_valid_and_sound(n in 1usize..9, count in 1usize..5, cat in any::<u64>(), seed in any::<u64>(), start in 1usize..9) {
        let model = common::catalog(n, count, cat);
        let start = (start - 1) % n + 1;
        check(&model, seed, &greedy_schedule(&model, seed, start, MAX_TIME).unwrap())?;
        let plan = build_backbone_plan(&model).unwrap();
        check(&model, seed, &linear_schedule(&model, seed, &plan, start, MAX_TIME).unwrap())?;
        for graph in [ClosenessGraph::complete(n, 1), ClosenessGraph::edgeless(n)] {
            let meta = build_meta_graph(&graph);
            check(&model, seed, &meta_graph_schedule(&model, seed, &meta, start, MAX_TIME).unwrap())?;
        }
        let closeness = estimate_closeness(&model, 3, 0.5, 8, seed, &(1..=n).collect::<Vec<_>>()).unwrap();
        let meta = build_meta_graph(&closeness);
        check(&model, seed, &meta_graph_schedule(&model, seed, &meta, start, MAX_TIME).unwrap())?;
    }

    #[test]
    fn plans_satisfy_their_invariants(n in 2usize..30, count in 1usize..8, cat in any::<u64>()) {
        let model = common::catalog(n, count, cat);
        let plan = build_backbone_plan(&model).unwrap();
        prop_assert!(plan.violations().is_empty(), "{:?}", plan.violations());
    }

    #[test]
    fn online_runs_are_valid(n in 2usize..12, k in 2usize..12, seed in any::<u64>(), start in 1usize..12) {
        let k = k.min(n).max(2);
        prop_assume!(n > 2);
        let model = star_catalog(n, k).unwrap();
        let start = (start - 1) % n + 1;
        for name in ["stand_still", "random_walk", "centre_chase", "centre_grab", "mst_euler"] {
            let mut policy = policy_by_name(name, &model).unwrap();
            let run = run_online(&model, seed, policy.as_mut(), start, 3000).unwrap();
            let w = TemporalWindow::materialize(&model, seed, 1, run.walk.current_time()).unwrap();
            let r = validate_walk(&w, &run.walk, &VertexSet::full(n));
            prop_assert!(r.valid);
            prop_assert_eq!(r.arrival, run.dexp);
        }
        check(&model, seed, &star_two_phase(&model, seed, start, MAX_TIME).unwrap())?;
    }
}

#[test]
fn fast_crossings_use_present_edges() {
    let model = ladder_model(60).unwrap();
    let plan = build_backbone_plan(&model).unwrap();
    for seed in 0..10 {
        let s = linear_schedule(&model, seed, &plan, 31, MAX_TIME).unwrap();
        let w = TemporalWindow::materialize(&model, seed, 1, s.arrival).unwrap();
        for leg in s.legs.iter().filter(|l| l.kind == LegKind::FastCrossing) {
            let crossing = (leg.start_time + 1..=leg.end_time).find(|&t| {
                let (a, b) = (s.walk.position_at(t - 1), s.walk.position_at(t));
                a != b && plan.fast_of[a] != plan.fast_of[b]
            });
            let t = crossing.expect("a fast crossing changes component");
            assert!(w.snapshot(t).has_edge(s.walk.position_at(t - 1), s.walk.position_at(t)));
        }
    }
}

#[test]
fn ladder_plan_matches_definitions() {
    let model = ladder_model(200).unwrap();
    let plan = build_backbone_plan(&model).unwrap();
    assert_eq!(plan.m, 298);
    assert!(plan.violations().is_empty(), "{:?}", plan.violations());
    // rungs have weight 100, below 4m / alpha^2, so the whole minimum tree is light
    assert_eq!(plan.backbone.len(), 199);
}

#[test]
fn half_stars_meta_schedule() {
    let model = half_stars(20).unwrap();
    let closeness = estimate_closeness(&model, 60, 1.0 / 9.0, 30, 5, &(1..=20).collect::<Vec<_>>()).unwrap();
    let meta = build_meta_graph(&closeness);
    for seed in 0..5 {
        let s = meta_graph_schedule(&model, seed, &meta, 20, MAX_TIME).unwrap();
        let w = TemporalWindow::materialize(&model, seed, 1, s.arrival).unwrap();
        assert!(validate_walk(&w, &s.walk, &VertexSet::full(20)).valid);
    }
}
