mod common;

use formation_core::costmodel::{build_cost_vectors, CostModelSpec};
use formation_core::generate::{generate, GenParams};
use formation_core::io::eight_node_graph;
use formation_core::oracle::{brute_force_plan, DEFAULT_ASSIGNMENT_CAP};
use formation_core::planner::{plan, reconstruct, PlanError, PlanOptions, SplitRule};
use formation_core::{Roadmap, Roadmap32, VertexId};
use proptest::prelude::*;

fn oracle(g: &Roadmap, robots: usize, goal: VertexId) -> Option<u64> {
    brute_force_plan(g, robots, 1, goal, g.vertex_count(), DEFAULT_ASSIGNMENT_CAP).unwrap().map(|s| s.formation_cost)
}

#[test]
fn fixture_optima_up_to_eight_robots() {
    // oracle values for the fixture, computed once by exhaustion
    let expected = [299, 377, 397, 449, 460, 483, 521, 542];
    let g = eight_node_graph::<f64>();
    for (i, &cost) in expected.iter().enumerate() {
        let r = i + 1;
        let options = PlanOptions { stop_at: Some(7), ..PlanOptions::default() };
        assert_eq!(plan(&g, r, 1, &options).unwrap().cost(7, r), Some(cost), "R={r}");
        if r <= 5 {
            assert_eq!(oracle(&g, r, 7), Some(cost), "R={r}");
        }
    }
}

#[test]
fn single_precision_fixture() {
    let g: Roadmap32 = eight_node_graph();
    let result = plan(&g, 4, 1, &PlanOptions::default()).unwrap();
    assert_eq!(result.cost(7, 4), Some(449));
}

#[test]
fn cheapest_split_misses_the_optimum() {
    let g = generate(180, &GenParams::new(9, 2));
    assert_eq!(oracle(&g, 2, 5), Some(457));
    let all = plan(&g, 2, 1, &PlanOptions::default()).unwrap();
    assert_eq!(all.cost(5, 2), Some(457));
    let cheapest = PlanOptions { split_rule: SplitRule::Cheapest, ..PlanOptions::default() };
    assert_eq!(plan(&g, 2, 1, &cheapest).unwrap().cost(5, 2), Some(461));
}

#[test]
fn goal_at_start_is_free() {
    let g = eight_node_graph::<f64>();
    let result = plan(&g, 3, 1, &PlanOptions::default()).unwrap();
    let p = reconstruct(&result, 1, 3).unwrap();
    assert_eq!(p.formation_cost, 0);
    assert!(p.robots.iter().all(|r| r.nodes == [1]));
    assert!(p.edge_usage.is_empty());
}

#[test]
fn ranks_never_decrease() {
    let g = eight_node_graph::<f64>();
    for r in 1..=5 {
        let options = PlanOptions { record_pops: true, ..PlanOptions::default() };
        let result = plan(&g, r, 1, &options).unwrap();
        assert!(result.pops().windows(2).all(|w| w[0].rank <= w[1].rank), "R={r}");
    }
}

#[test]
fn state_cap_returns_partial_result() {
    let g = eight_node_graph::<f64>();
    let options = PlanOptions { max_states: 50, ..PlanOptions::default() };
    match plan(&g, 4, 1, &options) {
        Err(PlanError::StateLimit { limit, partial }) => {
            assert_eq!(limit, 50);
            assert!(partial.stats().generated <= 50);
        }
        other => panic!("expected the state cap, got {other:?}"),
    }
}

#[test]
fn errors() {
    let g = eight_node_graph::<f64>();
    assert!(matches!(plan(&g, 0, 1, &PlanOptions::default()), Err(PlanError::NoRobots)));
    assert!(matches!(plan(&g, 2, 42, &PlanOptions::default()), Err(PlanError::UnknownStart(42))));
    assert!(matches!(plan(&g, 11, 1, &PlanOptions::default()), Err(PlanError::Graph(_))));
}

#[test]
fn deterministic() {
    let g = generate(5, &GenParams::new(10, 3));
    let a = plan(&g, 3, 1, &PlanOptions::default()).unwrap();
    let b = plan(&g, 3, 1, &PlanOptions::default()).unwrap();
    assert_eq!(a.stats(), b.stats());
    for goal in 1..=10 {
        assert_eq!(reconstruct(&a, goal, 3), reconstruct(&b, goal, 3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_oracle(seed in 0u64..100_000, n in 2usize..9, robots in 1usize..4) {
        let g = generate(seed, &GenParams::new(n, robots));
        let result = plan(&g, robots, 1, &PlanOptions::default()).unwrap();
        prop_assert!(common::invariant_violations(&result).is_empty());
        for goal in 1..=n as VertexId {
            prop_assert_eq!(result.cost(goal, robots), oracle(&g, robots, goal), "goal {}", goal);
        }
    }

    #[test]
    fn early_exit_and_pruning_agree_with_full_search(seed in 0u64..100_000, n in 3usize..9, robots in 1usize..4) {
        let g = generate(seed, &GenParams::new(n, robots));
        let plain = PlanOptions { prune: false, ..PlanOptions::default() };
        let full = plan(&g, robots, 1, &plain).unwrap();
        let pruned = plan(&g, robots, 1, &PlanOptions::default()).unwrap();
        for goal in 1..=n as VertexId {
            let early = PlanOptions { stop_at: Some(goal), ..PlanOptions::default() };
            let one = plan(&g, robots, 1, &early).unwrap();
            prop_assert_eq!(one.cost(goal, robots), full.cost(goal, robots));
            prop_assert_eq!(pruned.cost(goal, robots), full.cost(goal, robots));
        }
    }

    #[test]
    fn single_robot_is_dijkstra(seed in 0u64..100_000, n in 1usize..50) {
        let g = generate(seed, &GenParams::new(n, 1));
        let result = plan(&g, 1, 1, &PlanOptions::default()).unwrap();
        let reference = common::dijkstra(&g, 1);
        for v in g.vertices() {
            prop_assert_eq!(result.cost(v.id, 1), reference.get(&v.id).copied());
        }
    }

    #[test]
    fn split_penalty_never_lowers_the_optimum(seed in 0u64..100_000, n in 3usize..8, robots in 2usize..4, penalty in 0u64..200) {
        let g = generate(seed, &GenParams::new(n, robots));
        let penalized = build_cost_vectors(&g, &CostModelSpec::explicit().with_split_penalty(penalty), robots).unwrap();
        let goal = n as VertexId;
        let (before, after) = (oracle(&g, robots, goal).unwrap(), oracle(&penalized, robots, goal).unwrap());
        prop_assert!(after >= before);
        let result = plan(&penalized, robots, 1, &PlanOptions::default()).unwrap();
        prop_assert_eq!(result.cost(goal, robots), Some(after));
    }

    #[test]
    fn reconstruction_is_consistent(seed in 0u64..100_000, n in 2usize..9, robots in 1usize..4) {
        let g = generate(seed, &GenParams::new(n, robots));
        let result = plan(&g, robots, 1, &PlanOptions::default()).unwrap();
        for goal in 1..=n as VertexId {
            let p = reconstruct(&result, goal, robots).unwrap();
            prop_assert_eq!(p.robots.len(), robots);
            prop_assert_eq!(p.robots.iter().map(|r| r.cost).max(), Some(p.formation_cost));
            for r in &p.robots {
                prop_assert_eq!(r.nodes.first(), Some(&1));
                prop_assert_eq!(r.nodes.last(), Some(&goal));
                // recompute each robot's cost from the reported edge usage
                let mut cost = 0;
                for w in r.nodes.windows(2) {
                    let u = p.edge_usage.iter().find(|u| u.from == w[0] && u.to == w[1]).expect("step is reported");
                    cost += g.edge(u.edge).unwrap().costs[u.count as usize - 1];
                }
                prop_assert_eq!(cost, r.cost);
            }
        }
    }
}
