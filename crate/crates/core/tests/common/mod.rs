//! Reference implementations shared by the integration tests. Written from
//! scratch here so they do not lean on the library code they check.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use formation_core::planner::{EdgeUsagePath, FormationState, OptimalPathSet};
use formation_core::roadmap::{Edge, RoadmapGraph, Vertex};
use formation_core::{Cost, VertexId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Textbook Dijkstra over the single-robot costs.
pub fn dijkstra(graph: &RoadmapGraph<f64>, source: VertexId) -> HashMap<VertexId, Cost> {
    let mut adj: HashMap<VertexId, Vec<(VertexId, Cost)>> = HashMap::new();
    for e in graph.edges() {
        let c = if e.zero_cost { 0 } else { e.costs[0] };
        adj.entry(e.u).or_default().push((e.v, c));
        adj.entry(e.v).or_default().push((e.u, c));
    }
    let mut dist: HashMap<VertexId, Cost> = HashMap::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist.contains_key(&v) {
            continue;
        }
        dist.insert(v, d);
        for &(w, c) in adj.get(&v).into_iter().flatten() {
            if !dist.contains_key(&w) {
                heap.push(Reverse((d + c, w)));
            }
        }
    }
    dist
}

/// Floyd-Warshall over the single-robot costs, keyed by vertex id.
pub fn all_pairs(graph: &RoadmapGraph<f64>) -> BTreeMap<(VertexId, VertexId), Cost> {
    let ids: Vec<VertexId> = graph.vertices().iter().map(|v| v.id).collect();
    let n = ids.len();
    let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let inf = Cost::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in graph.edges() {
        let c = if e.zero_cost { 0 } else { e.costs[0] };
        let (a, b) = (index[&e.u], index[&e.v]);
        d[a][b] = d[a][b].min(c);
        d[b][a] = d[b][a].min(c);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            out.insert((ids[i], ids[j]), d[i][j]);
        }
    }
    out
}

/// Random graph with unbounded degree: a random tree plus extra edges, each
/// edge with a cost vector of `width` entries.
pub fn random_graph(seed: u64, n: usize, extra: usize, width: usize) -> RoadmapGraph<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices: Vec<Vertex<f64>> = (0..n)
        .map(|i| {
            let p = formation_core::Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0));
            Vertex::new(i as VertexId, Some(p))
        })
        .collect();
    let mut pairs: Vec<(VertexId, VertexId)> = (1..n).map(|i| (rng.gen_range(0..i) as VertexId, i as VertexId)).collect();
    for _ in 0..extra {
        let a = rng.gen_range(0..n) as VertexId;
        let b = rng.gen_range(0..n) as VertexId;
        if a != b {
            pairs.push((a.min(b), a.max(b)));
        }
    }
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(k, (a, b))| {
            let mut e = Edge::new(k as u32, a, b, 1.0);
            let base: Cost = rng.gen_range(1..50);
            let slope: Cost = rng.gen_range(0..20);
            e.costs = (0..width as Cost).map(|r| base + r * slope).collect();
            e
        })
        .collect();
    RoadmapGraph::from_parts(vertices, edges).unwrap()
}

/// Pairwise edge-usage conflicts among `paths`, checked directly on the uses:
/// one pair traversing an edge in opposite directions, or the same directed
/// edge with different robot counts.
pub fn conflicts(paths: &[&EdgeUsagePath]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, p) in paths.iter().enumerate() {
        for q in &paths[i + 1..] {
            for a in p.uses() {
                for b in q.uses() {
                    if a.edge != b.edge {
                        continue;
                    }
                    if a.from == b.to && a.to == b.from && a.from != a.to {
                        out.push(format!("edge {} crossed both ways", a.edge));
                    } else if a.from == b.from && a.count != b.count {
                        out.push(format!("edge {} counts {} and {}", a.edge, a.count, b.count));
                    }
                }
            }
        }
    }
    out
}

/// For a full formation every robot is present, so the robots recorded on a
/// directed edge must equal the number of paths that use it.
pub fn count_mismatches(state: &FormationState) -> Vec<String> {
    let mut seen: BTreeMap<(u32, VertexId, VertexId), (u16, u16)> = BTreeMap::new();
    for p in state.paths() {
        for u in p.uses() {
            let slot = seen.entry((u.edge, u.from, u.to)).or_insert((u.count, 0));
            slot.1 += 1;
        }
    }
    seen.into_iter()
        .filter(|(_, (count, n))| count != n)
        .map(|((e, a, b), (count, n))| format!("edge {e} {a}->{b}: count {count}, used by {n}"))
        .collect()
}

/// Every problem found in any state of `result`.
pub fn invariant_violations(result: &OptimalPathSet) -> Vec<String> {
    let mut out = Vec::new();
    for (node, r, state) in result.iter() {
        let paths: Vec<&EdgeUsagePath> = state.paths().iter().map(|p| p.as_ref()).collect();
        for c in conflicts(&paths) {
            out.push(format!("({node}, {r}): {c}"));
        }
        if r == result.robots() {
            for c in count_mismatches(state) {
                out.push(format!("({node}, {r}): {c}"));
            }
        }
        for (i, p) in paths.iter().enumerate() {
            for q in &paths[i + 1..] {
                if !formation_core::planner::cross_edges_rule(&[*p], &[*q]) {
                    out.push(format!("({node}, {r}): cross_edges_rule rejects a pair"));
                }
                if !formation_core::planner::shared_edges_rule(&[*p], &[*q]) {
                    out.push(format!("({node}, {r}): shared_edges_rule rejects a pair"));
                }
            }
        }
    }
    out
}
