mod common;

use formation_core::build::{build_graph, BuildParams};
use formation_core::roadmap::{build_roadmap, load_environment, normalize_degree, prune_tails, EnvironmentMap};
use formation_core::{Map, Point};
use proptest::prelude::*;

const MAP: &str = r#"{
  "border": [[0,0],[40,0],[40,30],[0,30]],
  "obstacles": [
    [[8,8],[14,8],[14,20],[8,20]],
    [[22,4],[30,10],[24,14]],
    [[26,20],[34,20],[34,26],[26,26]]
  ]
}"#;

fn rings(map: &Map) -> Vec<Vec<(f64, f64)>> {
    std::iter::once(&map.border)
        .chain(&map.obstacles)
        .map(|p| p.vertices().iter().map(|v| (v.x, v.y)).collect())
        .collect()
}

/// Distance from a point to a segment, by projection.
fn segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 { 0.0 } else { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) };
    let (qx, qy) = (a.0 + t * dx, a.1 + t * dy);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

fn ring_distance(p: (f64, f64), ring: &[(f64, f64)]) -> f64 {
    (0..ring.len()).map(|i| segment_distance(p, ring[i], ring[(i + 1) % ring.len()])).fold(f64::INFINITY, f64::min)
}

/// Even-odd ray casting.
fn inside(p: (f64, f64), ring: &[(f64, f64)]) -> bool {
    let mut c = false;
    for i in 0..ring.len() {
        let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
        if (a.1 > p.1) != (b.1 > p.1) && p.0 < (b.0 - a.0) * (p.1 - a.1) / (b.1 - a.1) + a.0 {
            c = !c;
        }
    }
    c
}

#[test]
fn roadmap_vertices_have_clearance_and_lie_in_free_space() {
    let map: Map = load_environment(MAP.as_bytes()).unwrap();
    let rings = rings(&map);
    for min_clearance in [0.0, 1.0, 2.5] {
        let g = build_roadmap(&map, 0.5, min_clearance).unwrap();
        assert!(g.is_connected());
        for v in g.vertices() {
            let p = v.position.unwrap();
            let p = (p.x, p.y);
            assert!(inside(p, &rings[0]), "{p:?} outside border");
            assert!(rings[1..].iter().all(|r| !inside(p, r)), "{p:?} inside an obstacle");
            let clearance = rings.iter().map(|r| ring_distance(p, r)).fold(f64::INFINITY, f64::min);
            assert!(clearance > 0.0 && clearance + 1e-9 >= min_clearance, "{p:?}: clearance {clearance}");
        }
        for e in g.edges() {
            // recorded clearance never exceeds the clearance of either endpoint
            for end in [e.u, e.v] {
                let p = g.vertex(end).unwrap().position.unwrap();
                let c = rings.iter().map(|r| ring_distance((p.x, p.y), r)).fold(f64::INFINITY, f64::min);
                assert!(e.clearance <= c + 1e-9);
            }
            assert!(e.clearance + 1e-9 >= min_clearance);
        }
    }
}

#[test]
fn roadmap_passes_between_obstacles() {
    let map: Map = load_environment(MAP.as_bytes()).unwrap();
    let built = build_graph(
        &map,
        &BuildParams {
            sampling_step: 0.5,
            min_clearance: 0.5,
            terminals: vec![Point::new(2.0, 2.0), Point::new(38.0, 28.0), Point::new(18.0, 15.0)],
        },
    )
    .unwrap();
    let g = &built.graph;
    assert!(g.max_degree() <= 3);
    assert!(g.is_connected());
    // the roadmap loops around the tall obstacle, so some vertex lies left of it and some right
    let xs: Vec<f64> = g.vertices().iter().map(|v| v.position.unwrap().x).collect();
    assert!(xs.iter().any(|&x| x < 8.0) && xs.iter().any(|&x| x > 14.0));
    let non_terminal_tails = g.vertices().iter().filter(|v| !v.terminal && g.degree(v.id) <= 1).count();
    assert_eq!(non_terminal_tails, 0);
}

#[test]
fn single_precision_map() {
    let map: EnvironmentMap<f32> = load_environment(MAP.as_bytes()).unwrap();
    let g = build_roadmap(&map, 0.5f32, 0.5f32).unwrap();
    assert!(g.edge_count() > 10);
    assert!(normalize_degree(&g).max_degree() <= 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_keeps_distances(seed in 0u64..10_000, n in 3usize..30, extra in 0usize..40) {
        let g = common::random_graph(seed, n, extra, 2);
        let out = normalize_degree(&g);
        prop_assert!(out.max_degree() <= 3);
        prop_assert!(out.vertices().iter().filter(|v| v.origin == v.id).count() == n);
        let before = common::all_pairs(&g);
        let after = common::all_pairs(&out);
        for ((a, b), d) in before {
            prop_assert_eq!(after[&(a, b)], d);
        }
        // already normalized graphs are left alone
        let again = normalize_degree(&out);
        prop_assert_eq!(again.vertices(), out.vertices());
        prop_assert_eq!(again.edges(), out.edges());
    }

    #[test]
    fn prune_is_idempotent(seed in 0u64..10_000, n in 2usize..40, extra in 0usize..6, terminals in proptest::collection::vec(0u32..40, 0..3)) {
        let mut g = common::random_graph(seed, n, extra, 1);
        for t in terminals.into_iter().filter(|&t| (t as usize) < n) {
            g.set_terminal(t, true).unwrap();
        }
        let once = prune_tails(&g);
        prop_assert!(once.vertices().iter().all(|v| v.terminal || once.degree(v.id) >= 2));
        prop_assert!(once.vertices().iter().filter(|v| v.terminal).count() == g.vertices().iter().filter(|v| v.terminal).count());
        let twice = prune_tails(&once);
        prop_assert_eq!(twice.vertices(), once.vertices());
        prop_assert_eq!(twice.edges(), once.edges());
    }
}
