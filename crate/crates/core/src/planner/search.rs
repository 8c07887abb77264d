use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use thiserror::Error;

use super::path::{CostGraph, GraphViewError};
use super::rules::{MergeRules, UsageSummary};
use super::state::{extend_state_with, FormationState, SplitRule};
use super::table::PartnerTable;
use crate::geometry::Scalar;
use crate::roadmap::{Cost, RoadmapGraph, VertexId};

pub const DEFAULT_MAX_STATES: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanOptions {
    pub split_rule: SplitRule,
    pub merge_rules: MergeRules,
    /// Upper bound on distinct generated states.
    pub max_states: usize,
    /// Stop as soon as this vertex is reached by the full formation.
    ///
    /// States are then ranked by their cost plus a lower bound on the
    /// remaining distance to this vertex, and states that cannot reach it are
    /// dropped, so entries for other vertices are incomplete.
    pub stop_at: Option<VertexId>,
    /// Keep a [`PopRecord`] of every popped state.
    pub record_pops: bool,
    /// Drop states that cannot be part of an optimal full formation.
    ///
    /// Moving all robots together gives an upper bound on the formation cost
    /// at each target; a state whose cost plus the cheapest remaining
    /// distance exceeds the bound of every target is discarded. Entries for
    /// fewer robots may then be missing or costlier than without pruning.
    pub prune: bool,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            split_rule: SplitRule::default(),
            merge_rules: MergeRules::default(),
            max_states: DEFAULT_MAX_STATES,
            stop_at: None,
            record_pops: false,
            prune: true,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PlanStats {
    pub generated: usize,
    pub popped: usize,
    pub merged: usize,
    pub duplicates: usize,
    /// States discarded by the bound check.
    pub pruned: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PopRecord {
    pub rank: Cost,
    pub cost: Cost,
    pub robots: usize,
    pub node: VertexId,
}

/// Cheapest popped state for every reached `(vertex, robots)` pair.
#[derive(Debug, Clone)]
pub struct OptimalPathSet {
    robots: usize,
    start: VertexId,
    best: BTreeMap<(VertexId, usize), FormationState>,
    graph: CostGraph,
    stats: PlanStats,
    pops: Vec<PopRecord>,
}

impl OptimalPathSet {
    pub fn robots(&self) -> usize {
        self.robots
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn get(&self, node: VertexId, robots: usize) -> Option<&FormationState> {
        self.best.get(&(node, robots))
    }

    pub fn cost(&self, node: VertexId, robots: usize) -> Option<Cost> {
        self.get(node, robots).map(FormationState::cost)
    }

    /// Entries ordered by vertex, then robot count.
    pub fn iter(&self) -> impl Iterator<Item = (VertexId, usize, &FormationState)> + '_ {
        self.best.iter().map(|(&(v, r), s)| (v, r, s))
    }

    pub fn len(&self) -> usize {
        self.best.len()
    }

    pub fn is_empty(&self) -> bool {
        self.best.is_empty()
    }

    pub fn graph(&self) -> &CostGraph {
        &self.graph
    }

    pub fn stats(&self) -> PlanStats {
        self.stats
    }

    /// Popped states in order; empty unless `record_pops` was set.
    pub fn pops(&self) -> &[PopRecord] {
        &self.pops
    }
}

#[derive(Debug, Clone, Error)]
pub enum PlanError {
    #[error("start vertex {0} is not in the graph")]
    UnknownStart(VertexId),
    #[error("robot count must be at least 1")]
    NoRobots,
    #[error(transparent)]
    Graph(#[from] GraphViewError),
    #[error("state limit of {limit} exceeded")]
    StateLimit { limit: usize, partial: Box<OptimalPathSet> },
}

/// Plans from `start` to every vertex for formations of 1 to `robots` robots.
pub fn plan<T: Scalar>(
    graph: &RoadmapGraph<T>,
    robots: usize,
    start: VertexId,
    options: &PlanOptions,
) -> Result<OptimalPathSet, PlanError> {
    if robots == 0 {
        return Err(PlanError::NoRobots);
    }
    plan_on(CostGraph::new(graph, robots)?, start, options)
}

/// [`plan`] on a prepared cost view.
pub fn plan_on(graph: CostGraph, start: VertexId, options: &PlanOptions) -> Result<OptimalPathSet, PlanError> {
    let robots = graph.robots();
    if robots == 0 {
        return Err(PlanError::NoRobots);
    }
    if !graph.contains(start) {
        return Err(PlanError::UnknownStart(start));
    }
    let mut search = Search::new(&graph, start, options);
    let outcome = search.run();
    let Search { best, stats, pops, .. } = search;
    let result = OptimalPathSet { robots, start, best, graph, stats, pops };
    match outcome {
        Ok(()) => Ok(result),
        Err(limit) => Err(PlanError::StateLimit { limit, partial: Box::new(result) }),
    }
}

struct Seen {
    rank: Cost,
    popped: bool,
}

struct Search<'a> {
    graph: &'a CostGraph,
    options: &'a PlanOptions,
    robots: usize,
    queue: BinaryHeap<Reverse<FormationState>>,
    seen: HashMap<FormationState, Seen>,
    /// Popped states per vertex.
    settled: HashMap<VertexId, PartnerTable>,
    start: VertexId,
    pending: BTreeSet<VertexId>,
    /// Remaining-distance bounds when heading for one goal.
    bounds: Option<HashMap<VertexId, Cost>>,
    /// Largest useful state cost per vertex.
    slack: Option<HashMap<VertexId, Cost>>,
    best: BTreeMap<(VertexId, usize), FormationState>,
    stats: PlanStats,
    pops: Vec<PopRecord>,
}

impl<'a> Search<'a> {
    fn new(graph: &'a CostGraph, start: VertexId, options: &'a PlanOptions) -> Self {
        let robots = graph.robots();
        let mut search = Search {
            graph,
            options,
            robots,
            queue: BinaryHeap::new(),
            seen: HashMap::new(),
            settled: HashMap::new(),
            start,
            pending: graph.vertices().iter().copied().collect(),
            bounds: options.stop_at.map(|goal| graph.lower_bounds_to(goal)),
            slack: options.prune.then(|| {
                let mut budget = graph.together_costs_from(start);
                if let Some(goal) = options.stop_at {
                    budget.retain(|&v, _| v == goal);
                }
                graph.slack(&budget)
            }),
            best: BTreeMap::new(),
            stats: PlanStats::default(),
            pops: Vec::new(),
        };
        for r in 1..robots {
            search.best.insert((start, r), FormationState::at_start(start, r));
        }
        let initial = FormationState::at_start(start, robots);
        search.seen.insert(initial.clone(), Seen { rank: 0, popped: false });
        search.stats.generated = 1;
        search.queue.push(Reverse(initial));
        search
    }

    fn push(&mut self, state: FormationState) -> Result<(), usize> {
        if let Some(slack) = &self.slack {
            if slack.get(&state.node()).is_none_or(|&s| state.cost() > s) {
                self.stats.pruned += 1;
                return Ok(());
            }
        }
        let state = match &self.bounds {
            Some(bounds) => match bounds.get(&state.node()) {
                Some(&h) => {
                    let floor = state.cost() + h;
                    state.with_rank(floor)
                }
                None => return Ok(()),
            },
            None => state,
        };
        if let Some(seen) = self.seen.get_mut(&state) {
            if !seen.popped && state.rank() < seen.rank {
                seen.rank = state.rank();
                self.queue.push(Reverse(state));
            } else {
                self.stats.duplicates += 1;
            }
            return Ok(());
        }
        if self.stats.generated >= self.options.max_states {
            return Err(self.options.max_states);
        }
        self.stats.generated += 1;
        self.seen.insert(state.clone(), Seen { rank: state.rank(), popped: false });
        self.queue.push(Reverse(state));
        Ok(())
    }

    fn run(&mut self) -> Result<(), usize> {
        while let Some(Reverse(state)) = self.queue.pop() {
            let seen = self.seen.get_mut(&state).expect("queued states are recorded");
            if seen.popped || state.rank() > seen.rank {
                continue;
            }
            seen.popped = true;
            self.stats.popped += 1;
            let (node, r) = (state.node(), state.robots());
            if self.options.record_pops {
                self.pops.push(PopRecord { rank: state.rank(), cost: state.cost(), robots: r, node });
            }
            match self.best.get(&(node, r)) {
                Some(b) if b.cost() <= state.cost() => {}
                _ => {
                    self.best.insert((node, r), state.clone());
                }
            }
            if r == self.robots {
                self.pending.remove(&node);
                if self.pending.is_empty() || self.options.stop_at == Some(node) {
                    return Ok(());
                }
            }

            for link in self.graph.arcs(node) {
                for k in 1..=r {
                    for next in extend_state_with(self.graph, &state, link.edge, link.to, k, self.options.split_rule) {
                        self.push(next.with_rank(state.rank()))?;
                    }
                }
            }

            // partners include the state itself
            let summary = UsageSummary::indexed(state.paths(), self.graph);
            let (graph, start) = (self.graph, self.start);
            let table = self.settled.entry(node).or_insert_with(|| PartnerTable::new(graph, node, start));
            let at = table.insert(state, summary);
            let (state, summary) = table.get(at);
            let mut merged = Vec::new();
            for (t, ts) in table.partners(at, self.robots - r, &self.options.merge_rules) {
                if self.options.merge_rules.admits_summaries(summary, ts) {
                    let paths = state.paths().iter().chain(t.paths()).cloned().collect();
                    merged.push(FormationState::new(node, paths).with_rank(state.rank()));
                }
            }
            self.stats.merged += merged.len();
            for next in merged {
                self.push(next)?;
            }
        }
        Ok(())
    }
}
