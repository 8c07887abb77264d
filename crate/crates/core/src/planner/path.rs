use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::geometry::Scalar;
use crate::roadmap::{Cost, EdgeId, RoadmapGraph, VertexId};

/// One traversal of an edge in a given direction, shared by `count` robots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeUse {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub count: u16,
}

impl EdgeUse {
    pub fn new(edge: EdgeId, from: VertexId, to: VertexId, count: u16) -> Self {
        EdgeUse { edge, from, to, count }
    }

    pub fn key(&self) -> DirectedEdge {
        DirectedEdge { edge: self.edge, from: self.from, to: self.to }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedEdge {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
}

impl DirectedEdge {
    pub fn reversed(self) -> Self {
        DirectedEdge { edge: self.edge, from: self.to, to: self.from }
    }
}

/// A single robot's route as chained edge uses starting at `start`.
///
/// `cost` caches [`robot_path_cost`] and is maintained by the constructors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeUsagePath {
    start: VertexId,
    uses: Vec<EdgeUse>,
    cost: Cost,
}

impl EdgeUsagePath {
    pub fn empty(start: VertexId) -> Self {
        EdgeUsagePath { start, uses: Vec::new(), cost: 0 }
    }

    /// Builds a path from its uses, checking that they chain from `start`.
    pub fn from_uses(graph: &CostGraph, start: VertexId, uses: Vec<EdgeUse>) -> Result<Self, PathError> {
        let mut at = start;
        for u in &uses {
            if u.from != at {
                return Err(PathError::Broken { at, next: u.from });
            }
            at = u.to;
        }
        let mut path = EdgeUsagePath { start, uses, cost: 0 };
        path.cost = robot_path_cost(&path, graph)?;
        Ok(path)
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.uses.last().map_or(self.start, |u| u.to)
    }

    pub fn uses(&self) -> &[EdgeUse] {
        &self.uses
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.uses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.uses.is_empty()
    }

    pub fn nodes(&self) -> Vec<VertexId> {
        std::iter::once(self.start).chain(self.uses.iter().map(|u| u.to)).collect()
    }

    pub fn visits(&self, vertex: VertexId) -> bool {
        self.start == vertex || self.uses.iter().any(|u| u.to == vertex)
    }

    /// Appends one edge use whose per-robot cost is `step_cost`.
    pub(crate) fn extended(&self, step: EdgeUse, step_cost: Cost) -> Self {
        debug_assert_eq!(step.from, self.end());
        let mut uses = Vec::with_capacity(self.uses.len() + 1);
        uses.extend_from_slice(&self.uses);
        uses.push(step);
        EdgeUsagePath { start: self.start, uses, cost: self.cost + step_cost }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("edge use leaves {next} but the path is at {at}")]
    Broken { at: VertexId, next: VertexId },
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("edge {edge} has no cost entry for {count} robots")]
    CountOutOfRange { edge: EdgeId, count: u16 },
}

/// Sum over the path's uses of the edge cost for the recorded robot count.
pub fn robot_path_cost(path: &EdgeUsagePath, graph: &CostGraph) -> Result<Cost, PathError> {
    path.uses.iter().try_fold(0, |acc, u| Ok(acc + graph.use_cost(u.edge, u.count)?))
}

/// Cost of the worst path; `None` for an empty set.
pub fn state_cost<'a, I>(paths: I) -> Option<Cost>
where
    I: IntoIterator<Item = &'a EdgeUsagePath>,
{
    paths.into_iter().map(EdgeUsagePath::cost).max()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphViewError {
    #[error("edge {edge} has {len} cost entries, need {needed}")]
    MissingCosts { edge: EdgeId, len: usize, needed: usize },
    #[error("vertex {vertex} has degree {degree} (normalize the graph first)")]
    DegreeTooHigh { vertex: VertexId, degree: usize },
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Link {
    pub edge: EdgeId,
    pub to: VertexId,
}

/// Read-only planning view of a roadmap: adjacency and cost vectors only.
#[derive(Debug, Clone)]
pub struct CostGraph {
    robots: usize,
    vertices: Vec<VertexId>,
    adjacency: HashMap<VertexId, Vec<Link>>,
    costs: HashMap<EdgeId, Arc<[Cost]>>,
    origin: HashMap<VertexId, VertexId>,
    zero_cost: HashMap<EdgeId, bool>,
    /// Edge id to `(slot, u)`; the directed index is `2 * slot` from `u`, `2 * slot + 1` otherwise.
    slots: HashMap<EdgeId, (usize, VertexId)>,
}

impl CostGraph {
    /// Validates that every edge prices `robots` robots and no vertex exceeds degree 3.
    pub fn new<T: Scalar>(graph: &RoadmapGraph<T>, robots: usize) -> Result<Self, GraphViewError> {
        Self::build(graph, robots, true)
    }

    /// Like [`CostGraph::new`] but without the degree bound.
    pub fn new_unbounded<T: Scalar>(graph: &RoadmapGraph<T>, robots: usize) -> Result<Self, GraphViewError> {
        Self::build(graph, robots, false)
    }

    fn build<T: Scalar>(graph: &RoadmapGraph<T>, robots: usize, bounded: bool) -> Result<Self, GraphViewError> {
        let mut costs = HashMap::new();
        let mut zero_cost = HashMap::new();
        for e in graph.edges() {
            let vector: Arc<[Cost]> = if e.zero_cost {
                vec![0; robots].into()
            } else if e.costs.len() >= robots {
                e.costs[..robots].into()
            } else {
                return Err(GraphViewError::MissingCosts { edge: e.id, len: e.costs.len(), needed: robots });
            };
            costs.insert(e.id, vector);
            zero_cost.insert(e.id, e.zero_cost);
        }
        let mut vertices: Vec<VertexId> = graph.vertices().iter().map(|v| v.id).collect();
        vertices.sort_unstable();
        let mut adjacency = HashMap::new();
        for &v in &vertices {
            let degree = graph.degree(v);
            if bounded && degree > 3 {
                return Err(GraphViewError::DegreeTooHigh { vertex: v, degree });
            }
            let mut arcs: Vec<Link> = graph.incident_edges(v).map(|e| Link { edge: e.id, to: e.other(v) }).collect();
            arcs.sort_by_key(|a| (a.to, a.edge));
            adjacency.insert(v, arcs);
        }
        let origin = graph.vertices().iter().map(|v| (v.id, v.origin)).collect();
        let slots = graph.edges().iter().enumerate().map(|(i, e)| (e.id, (i, e.u))).collect();
        Ok(CostGraph { robots, vertices, adjacency, costs, origin, zero_cost, slots })
    }

    pub fn robots(&self) -> usize {
        self.robots
    }

    /// Vertex ids in ascending order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.adjacency.contains_key(&v)
    }

    pub(crate) fn arcs(&self, v: VertexId) -> &[Link] {
        self.adjacency.get(&v).map_or(&[], Vec::as_slice)
    }

    /// `(edge, neighbour)` pairs around `v`, sorted by neighbour then edge id.
    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        self.arcs(v).iter().map(|a| (a.edge, a.to))
    }

    pub fn cost_vector(&self, edge: EdgeId) -> Option<&[Cost]> {
        self.costs.get(&edge).map(|c| &c[..])
    }

    pub fn use_cost(&self, edge: EdgeId, count: u16) -> Result<Cost, PathError> {
        let vector = self.costs.get(&edge).ok_or(PathError::UnknownEdge(edge))?;
        usize::from(count)
            .checked_sub(1)
            .and_then(|k| vector.get(k))
            .copied()
            .ok_or(PathError::CountOutOfRange { edge, count })
    }

    pub fn origin(&self, v: VertexId) -> VertexId {
        self.origin.get(&v).copied().unwrap_or(v)
    }

    /// Cheapest single-robot cost from every vertex to `goal`, pricing each
    /// edge at the smallest entry of its vector. Vertices that cannot reach
    /// `goal` are absent.
    pub fn lower_bounds_to(&self, goal: VertexId) -> HashMap<VertexId, Cost> {
        let mut dist = HashMap::new();
        let mut heap = BinaryHeap::from([Reverse((0, goal))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist.contains_key(&v) {
                continue;
            }
            dist.insert(v, d);
            for link in self.arcs(v) {
                if !dist.contains_key(&link.to) {
                    let step = self.costs[&link.edge].iter().copied().min().unwrap_or(0);
                    heap.push(Reverse((d + step, link.to)));
                }
            }
        }
        dist
    }

    /// Cost of moving the whole formation together from `start` to every
    /// reachable vertex, paying the full-formation entry on each edge. This is
    /// a feasible plan, so it bounds the optimal formation cost from above.
    pub fn together_costs_from(&self, start: VertexId) -> HashMap<VertexId, Cost> {
        let mut dist = HashMap::new();
        let mut heap = BinaryHeap::from([Reverse((0, start))]);
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist.contains_key(&v) {
                continue;
            }
            dist.insert(v, d);
            for link in self.arcs(v) {
                if !dist.contains_key(&link.to) {
                    let step = self.costs[&link.edge].last().copied().unwrap_or(0);
                    heap.push(Reverse((d + step, link.to)));
                }
            }
        }
        dist
    }

    /// For every vertex `u`, the largest `budget[v] - h(u, v)` over the
    /// vertices `v` in `budget`, where `h` is the cheapest-entry distance.
    /// Vertices from which every `v` is out of budget are absent.
    pub(crate) fn slack(&self, budget: &HashMap<VertexId, Cost>) -> HashMap<VertexId, Cost> {
        let mut best: HashMap<VertexId, Cost> = HashMap::new();
        let mut heap: BinaryHeap<(Cost, VertexId)> = budget.iter().map(|(&v, &b)| (b, v)).collect();
        while let Some((value, v)) = heap.pop() {
            if best.contains_key(&v) {
                continue;
            }
            best.insert(v, value);
            for link in self.arcs(v) {
                if best.contains_key(&link.to) {
                    continue;
                }
                let step = self.costs[&link.edge].iter().copied().min().unwrap_or(0);
                if let Some(left) = value.checked_sub(step) {
                    heap.push((left, link.to));
                }
            }
        }
        best
    }

    /// Number of directed edges.
    pub(crate) fn directed_count(&self) -> usize {
        2 * self.slots.len()
    }

    pub(crate) fn directed_index(&self, edge: EdgeId, from: VertexId) -> Option<usize> {
        self.slots.get(&edge).map(|&(slot, u)| 2 * slot + usize::from(from != u))
    }

    pub fn is_zero_cost(&self, edge: EdgeId) -> bool {
        self.zero_cost.get(&edge).copied().unwrap_or(false)
    }
}
