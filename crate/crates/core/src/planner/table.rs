use std::collections::HashMap;

use super::path::{CostGraph, DirectedEdge};
use super::rules::{MergeRules, UsageSummary};
use super::state::FormationState;
use crate::roadmap::VertexId;

/// `(recorded count, paths)` on each key edge, zero when unused.
type Key = Vec<(u16, u16)>;

struct Bucket {
    robots: usize,
    key: Key,
    entries: Vec<(FormationState, UsageSummary)>,
}

/// Popped states at one vertex, grouped by robot count and by how they use
/// a few key edges (the edges into the vertex and out of the start), so
/// whole groups can be skipped when looking for merge partners.
pub(crate) struct PartnerTable {
    edges: Vec<DirectedEdge>,
    buckets: Vec<Bucket>,
    lookup: HashMap<(usize, Key), usize>,
}

impl PartnerTable {
    pub(crate) fn new(graph: &CostGraph, node: VertexId, start: VertexId) -> Self {
        let into = graph.neighbours(node).map(|(edge, from)| DirectedEdge { edge, from, to: node });
        let out_of_start = graph.neighbours(start).map(|(edge, to)| DirectedEdge { edge, from: start, to });
        let mut edges: Vec<DirectedEdge> = into.chain(out_of_start).collect();
        edges.sort_unstable();
        edges.dedup();
        PartnerTable { edges, buckets: Vec::new(), lookup: HashMap::new() }
    }

    fn key(&self, summary: &UsageSummary) -> Key {
        self.edges.iter().map(|e| summary.get(e).unwrap_or((0, 0))).collect()
    }

    /// Stores a state and returns its bucket key.
    pub(crate) fn insert(&mut self, state: FormationState, summary: UsageSummary) -> (usize, usize) {
        let key = self.key(&summary);
        let robots = state.robots();
        let slot = *self.lookup.entry((robots, key.clone())).or_insert_with(|| {
            self.buckets.push(Bucket { robots, key, entries: Vec::new() });
            self.buckets.len() - 1
        });
        self.buckets[slot].entries.push((state, summary));
        (slot, self.buckets[slot].entries.len() - 1)
    }

    pub(crate) fn get(&self, at: (usize, usize)) -> &(FormationState, UsageSummary) {
        &self.buckets[at.0].entries[at.1]
    }

    /// Stored states with at most `room` robots that `rules` could admit next
    /// to the state stored at `at`.
    pub(crate) fn partners<'a>(
        &'a self,
        at: (usize, usize),
        room: usize,
        rules: &'a MergeRules,
    ) -> impl Iterator<Item = &'a (FormationState, UsageSummary)> + 'a {
        let key = &self.buckets[at.0].key;
        let filter = rules.shared_edges && rules.capacity;
        self.buckets
            .iter()
            .filter(move |b| b.robots <= room && (!filter || compatible(key, &b.key)))
            .flat_map(|b| b.entries.iter())
    }
}

fn compatible(a: &Key, b: &Key) -> bool {
    a.iter().zip(b).all(|(&(ca, na), &(cb, nb))| na == 0 || nb == 0 || (ca == cb && na + nb <= ca))
}
