//! Exhaustive reference solver for small instances.
//!
//! Every multiset of `R` simple start-goal paths is scored directly: a robot
//! pays, on each directed edge it uses, the cost for the number of robots
//! whose paths use that directed edge. Assignments using an edge in both
//! directions are discarded.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::geometry::Scalar;
use crate::roadmap::{Cost, EdgeId, RoadmapGraph, VertexId};

/// Multisets examined before [`brute_force_plan`] gives up.
pub const DEFAULT_ASSIGNMENT_CAP: u128 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplePath {
    pub nodes: Vec<VertexId>,
    /// `edges[i]` joins `nodes[i]` and `nodes[i + 1]`.
    pub edges: Vec<EdgeId>,
}

/// All simple paths from `start` to `goal` with at most `max_edges` edges,
/// ordered by node sequence, then edge ids.
pub fn enumerate_simple_paths<T: Scalar>(
    graph: &RoadmapGraph<T>,
    start: VertexId,
    goal: VertexId,
    max_edges: usize,
) -> Vec<SimplePath> {
    if !graph.contains_vertex(start) || !graph.contains_vertex(goal) {
        return Vec::new();
    }
    let mut adjacency: HashMap<VertexId, Vec<(VertexId, EdgeId)>> = HashMap::new();
    for e in graph.edges() {
        adjacency.entry(e.u).or_default().push((e.v, e.id));
        adjacency.entry(e.v).or_default().push((e.u, e.id));
    }
    for list in adjacency.values_mut() {
        list.sort_unstable();
    }

    let mut out = Vec::new();
    let mut nodes = vec![start];
    let mut edges = Vec::new();
    dfs(&adjacency, goal, max_edges, &mut nodes, &mut edges, &mut out);
    out
}

fn dfs(
    adjacency: &HashMap<VertexId, Vec<(VertexId, EdgeId)>>,
    goal: VertexId,
    max_edges: usize,
    nodes: &mut Vec<VertexId>,
    edges: &mut Vec<EdgeId>,
    out: &mut Vec<SimplePath>,
) {
    let here = *nodes.last().expect("path has a start");
    if here == goal {
        out.push(SimplePath { nodes: nodes.clone(), edges: edges.clone() });
        return;
    }
    if edges.len() == max_edges {
        return;
    }
    for &(next, edge) in adjacency.get(&here).map_or(&[][..], Vec::as_slice) {
        if nodes.contains(&next) {
            continue;
        }
        nodes.push(next);
        edges.push(edge);
        dfs(adjacency, goal, max_edges, nodes, edges, out);
        nodes.pop();
        edges.pop();
    }
}

/// One path per robot, with the robot counts they induce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointAssignment {
    /// Sorted paths; equal paths repeat.
    pub paths: Vec<SimplePath>,
    /// Robot cost of each entry of `paths`.
    pub costs: Vec<Cost>,
    /// Robots per directed edge `(edge, from, to)`.
    pub usage: BTreeMap<(EdgeId, VertexId, VertexId), usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSolution {
    pub formation_cost: Cost,
    pub assignment: JointAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("robot count must be at least 1")]
    NoRobots,
    #[error("{count} path multisets exceed the limit of {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("edge {edge} has {len} cost entries, need {needed}")]
    MissingCosts { edge: EdgeId, len: usize, needed: usize },
}

fn multisets(n: usize, k: usize) -> u128 {
    // C(n + k - 1, k)
    if n == 0 {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c.saturating_mul(n as u128 - 1 + i + 1) / (i + 1);
    }
    c
}

/// Cheapest formation cost for `robots` robots from `start` to `goal` over
/// all multisets of simple paths; ties go to the lexicographically first
/// assignment. `Ok(None)` when the goal cannot be reached.
pub fn brute_force_plan<T: Scalar>(
    graph: &RoadmapGraph<T>,
    robots: usize,
    start: VertexId,
    goal: VertexId,
    max_edges: usize,
    limit: u128,
) -> Result<Option<OracleSolution>, OracleError> {
    if robots == 0 {
        return Err(OracleError::NoRobots);
    }
    let mut vectors: HashMap<EdgeId, Vec<Cost>> = HashMap::new();
    for e in graph.edges() {
        let v = if e.zero_cost {
            vec![0; robots]
        } else if e.costs.len() >= robots {
            e.costs[..robots].to_vec()
        } else {
            return Err(OracleError::MissingCosts { edge: e.id, len: e.costs.len(), needed: robots });
        };
        vectors.insert(e.id, v);
    }

    let paths = enumerate_simple_paths(graph, start, goal, max_edges);
    let count = multisets(paths.len(), robots);
    if count > limit {
        return Err(OracleError::TooLarge { count, limit });
    }
    if paths.is_empty() {
        return Ok(None);
    }

    // dense directed-edge ids; `id ^ 1` is the opposite direction
    let mut dense: HashMap<(EdgeId, VertexId, VertexId), usize> = HashMap::new();
    let mut edge_of: Vec<EdgeId> = Vec::new();
    for e in graph.edges() {
        let base = edge_of.len();
        dense.insert((e.id, e.u, e.v), base);
        dense.insert((e.id, e.v, e.u), base + 1);
        edge_of.extend([e.id, e.id]);
    }
    let steps: Vec<Vec<usize>> = paths
        .iter()
        .map(|p| {
            p.edges
                .iter()
                .zip(p.nodes.windows(2))
                .map(|(&e, w)| dense[&(e, w[0], w[1])])
                .collect()
        })
        .collect();

    let mut search = Exhaustive {
        steps: &steps,
        vectors: edge_of.iter().map(|e| vectors[e].clone()).collect(),
        counts: vec![0; edge_of.len()],
        chosen: Vec::with_capacity(robots),
        best: None,
    };
    search.choose(0, robots);
    let (formation_cost, picks) = search.best.expect("at least one path");

    let chosen: Vec<SimplePath> = picks.iter().map(|&i| paths[i].clone()).collect();
    let mut usage = BTreeMap::new();
    for p in &chosen {
        for (&e, w) in p.edges.iter().zip(p.nodes.windows(2)) {
            *usage.entry((e, w[0], w[1])).or_insert(0) += 1;
        }
    }
    let costs = chosen
        .iter()
        .map(|p| {
            p.edges
                .iter()
                .zip(p.nodes.windows(2))
                .map(|(&e, w)| vectors[&e][usage[&(e, w[0], w[1])] - 1])
                .sum()
        })
        .collect();
    Ok(Some(OracleSolution { formation_cost, assignment: JointAssignment { paths: chosen, costs, usage } }))
}

struct Exhaustive<'a> {
    steps: &'a [Vec<usize>],
    vectors: Vec<Vec<Cost>>,
    counts: Vec<usize>,
    chosen: Vec<usize>,
    best: Option<(Cost, Vec<usize>)>,
}

impl Exhaustive<'_> {
    fn choose(&mut self, first: usize, left: usize) {
        if left == 0 {
            self.score();
            return;
        }
        for i in first..self.steps.len() {
            for &d in &self.steps[i] {
                self.counts[d] += 1;
            }
            self.chosen.push(i);
            self.choose(i, left - 1);
            self.chosen.pop();
            for &d in &self.steps[i] {
                self.counts[d] -= 1;
            }
        }
    }

    fn score(&mut self) {
        let mut worst = 0;
        for &i in &self.chosen {
            let mut cost = 0;
            for &d in &self.steps[i] {
                if self.counts[d ^ 1] > 0 {
                    return;
                }
                cost += self.vectors[d][self.counts[d] - 1];
            }
            worst = worst.max(cost);
        }
        if self.best.as_ref().is_none_or(|(c, _)| worst < *c) {
            self.best = Some((worst, self.chosen.clone()));
        }
    }
}
