//! Admissibility rules for merging two sets of paths that meet at a vertex.

use super::path::{CostGraph, DirectedEdge, EdgeUsagePath};
use crate::roadmap::VertexId;

impl AsRef<EdgeUsagePath> for EdgeUsagePath {
    fn as_ref(&self) -> &EdgeUsagePath {
        self
    }
}

/// Directed-edge usage of a set of paths, sorted by edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct UsageSummary {
    /// `(edge, recorded robot count, paths of the set traversing it)`.
    edges: Vec<(DirectedEdge, u16, u16)>,
    /// Vertices reached by some path (the common start excluded), sorted.
    visited: Vec<VertexId>,
    bits: Option<EdgeBits>,
}

/// Bitsets over directed-edge indices for quick rejection.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct EdgeBits {
    used: Vec<u64>,
    /// Opposite directions of the used edges.
    reversed: Vec<u64>,
    /// Edges traversed by as many paths as their recorded count.
    saturated: Vec<u64>,
}

fn overlap(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

impl UsageSummary {
    pub(crate) fn of<P: AsRef<EdgeUsagePath>>(paths: &[P]) -> Self {
        let mut uses: Vec<(DirectedEdge, u16)> =
            paths.iter().flat_map(|p| p.as_ref().uses().iter().map(|u| (u.key(), u.count))).collect();
        uses.sort_unstable();
        let mut edges: Vec<(DirectedEdge, u16, u16)> = Vec::with_capacity(uses.len());
        for (key, count) in uses {
            match edges.last_mut() {
                // counts of one set are consistent, the first one stands
                Some((k, _, n)) if *k == key => *n += 1,
                _ => edges.push((key, count, 1)),
            }
        }
        let mut visited: Vec<VertexId> = edges.iter().map(|e| e.0.to).collect();
        visited.sort_unstable();
        visited.dedup();
        UsageSummary { edges, visited, bits: None }
    }

    /// Like [`UsageSummary::of`], with bitsets indexed by `graph`'s directed edges.
    pub(crate) fn indexed<P: AsRef<EdgeUsagePath>>(paths: &[P], graph: &CostGraph) -> Self {
        let mut summary = Self::of(paths);
        let words = graph.directed_count().div_ceil(64);
        let mut bits = EdgeBits { used: vec![0; words], reversed: vec![0; words], saturated: vec![0; words] };
        for (key, count, paths) in &summary.edges {
            let Some(i) = graph.directed_index(key.edge, key.from) else {
                return summary;
            };
            let j = i ^ 1;
            bits.used[i / 64] |= 1 << (i % 64);
            bits.reversed[j / 64] |= 1 << (j % 64);
            if paths >= count {
                bits.saturated[i / 64] |= 1 << (i % 64);
            }
        }
        summary.bits = Some(bits);
        summary
    }

    pub(crate) fn get(&self, key: &DirectedEdge) -> Option<(u16, u16)> {
        self.edges.binary_search_by(|e| e.0.cmp(key)).ok().map(|i| (self.edges[i].1, self.edges[i].2))
    }

    fn contains(&self, key: &DirectedEdge) -> bool {
        self.get(key).is_some()
    }
}

/// Every edge used by both sets in the same direction carries the same robot count.
pub fn shared_edges_rule<P: AsRef<EdgeUsagePath>, Q: AsRef<EdgeUsagePath>>(a: &[P], b: &[Q]) -> bool {
    shared_edges(&UsageSummary::of(a), &UsageSummary::of(b))
}

fn shared_edges(a: &UsageSummary, b: &UsageSummary) -> bool {
    b.edges.iter().all(|(key, count, _)| a.get(key).is_none_or(|(c, _)| c == *count))
}

/// At every vertex both sets pass through, the robots entering it (over the
/// union of both sets, shared edges counted once) are at least the robots
/// leaving it.
pub fn shared_nodes_rule<P: AsRef<EdgeUsagePath>, Q: AsRef<EdgeUsagePath>>(a: &[P], b: &[Q]) -> bool {
    shared_nodes(&UsageSummary::of(a), &UsageSummary::of(b))
}

fn shared_nodes(a: &UsageSummary, b: &UsageSummary) -> bool {
    let shared: Vec<VertexId> = a.visited.iter().filter(|v| b.visited.binary_search(v).is_ok()).copied().collect();
    if shared.is_empty() {
        return true;
    }
    let mut entering = vec![0u64; shared.len()];
    let mut leaving = vec![0u64; shared.len()];
    let union = a.edges.iter().chain(b.edges.iter().filter(|(k, _, _)| !a.contains(k)));
    for (key, count, _) in union {
        if let Ok(i) = shared.binary_search(&key.to) {
            entering[i] += u64::from(*count);
        }
        if let Ok(i) = shared.binary_search(&key.from) {
            leaving[i] += u64::from(*count);
        }
    }
    entering.iter().zip(&leaving).all(|(e, l)| e >= l)
}

/// No edge is used in one direction by one set and in the other direction by the other.
pub fn cross_edges_rule<P: AsRef<EdgeUsagePath>, Q: AsRef<EdgeUsagePath>>(a: &[P], b: &[Q]) -> bool {
    cross_edges(&UsageSummary::of(a), &UsageSummary::of(b))
}

fn cross_edges(a: &UsageSummary, b: &UsageSummary) -> bool {
    b.edges.iter().all(|(k, _, _)| !a.contains(&k.reversed()))
}

/// No directed edge is traversed by more paths of the union than the robot
/// count it records.
pub fn capacity_rule<P: AsRef<EdgeUsagePath>, Q: AsRef<EdgeUsagePath>>(a: &[P], b: &[Q]) -> bool {
    capacity(&UsageSummary::of(a), &UsageSummary::of(b))
}

fn capacity(a: &UsageSummary, b: &UsageSummary) -> bool {
    let fits = |m: &UsageSummary, other: &UsageSummary| {
        m.edges.iter().all(|(k, count, paths)| {
            let extra = other.get(k).map_or(0, |(_, n)| n);
            paths + extra <= *count
        })
    };
    fits(a, b) && fits(b, a)
}

/// Which checks a merge must pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeRules {
    pub shared_edges: bool,
    pub shared_nodes: bool,
    pub cross_edges: bool,
    pub capacity: bool,
}

impl Default for MergeRules {
    fn default() -> Self {
        MergeRules { shared_edges: true, shared_nodes: true, cross_edges: true, capacity: true }
    }
}

impl MergeRules {
    /// Evaluates the enabled rules on one pair of path sets.
    pub fn admits<P: AsRef<EdgeUsagePath>, Q: AsRef<EdgeUsagePath>>(&self, a: &[P], b: &[Q]) -> bool {
        self.admits_summaries(&UsageSummary::of(a), &UsageSummary::of(b))
    }

    pub(crate) fn admits_summaries(&self, a: &UsageSummary, b: &UsageSummary) -> bool {
        if let (Some(x), Some(y)) = (&a.bits, &b.bits) {
            if self.cross_edges && overlap(&x.used, &y.reversed) {
                return false;
            }
            if self.capacity && (overlap(&x.saturated, &y.used) || overlap(&y.saturated, &x.used)) {
                return false;
            }
        }
        (!self.shared_edges || shared_edges(a, b))
            && (!self.cross_edges || cross_edges(a, b))
            && (!self.capacity || capacity(a, b))
            && (!self.shared_nodes || shared_nodes(a, b))
    }
}
