use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::path::{CostGraph, EdgeUsagePath, EdgeUse};
use super::rules::MergeRules;
use crate::roadmap::{Cost, EdgeId, VertexId};

/// `r` robots standing at `node`, with the paths that brought them there.
///
/// Paths are kept sorted so two states with the same paths compare equal;
/// `cost` is the worst path cost and `rank` the queue priority, and neither
/// takes part in identity.
#[derive(Debug, Clone)]
pub struct FormationState {
    node: VertexId,
    cost: Cost,
    rank: Cost,
    paths: Vec<Arc<EdgeUsagePath>>,
}

impl FormationState {
    pub fn new(node: VertexId, mut paths: Vec<Arc<EdgeUsagePath>>) -> Self {
        debug_assert!(paths.iter().all(|p| p.end() == node));
        paths.sort();
        let cost = paths.iter().map(|p| p.cost()).max().unwrap_or(0);
        FormationState { node, cost, rank: cost, paths }
    }

    /// `robots` robots that have not moved from `start`.
    pub fn at_start(start: VertexId, robots: usize) -> Self {
        let empty = Arc::new(EdgeUsagePath::empty(start));
        FormationState { node: start, cost: 0, rank: 0, paths: vec![empty; robots] }
    }

    /// Raises the queue priority to at least `rank`.
    ///
    /// A split may leave only the cheaper robots of a group, so a successor
    /// can cost less than the state it came from; ranking it by the larger
    /// of the two keeps the queue order non-decreasing.
    pub fn with_rank(mut self, rank: Cost) -> Self {
        self.rank = self.rank.max(rank);
        self
    }

    /// Queue priority: the largest cost along the derivation of this state.
    pub fn rank(&self) -> Cost {
        self.rank
    }

    pub fn node(&self) -> VertexId {
        self.node
    }

    pub fn robots(&self) -> usize {
        self.paths.len()
    }

    pub fn cost(&self) -> Cost {
        self.cost
    }

    pub fn paths(&self) -> &[Arc<EdgeUsagePath>] {
        &self.paths
    }
}

impl PartialEq for FormationState {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node && self.paths == other.paths
    }
}

impl Eq for FormationState {}

impl Hash for FormationState {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.node.hash(state);
        self.paths.hash(state);
    }
}

/// Queue order: lower rank first, then cheaper, then larger formations,
/// then vertex id, then paths.
impl Ord for FormationState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.cost.cmp(&other.cost))
            .then_with(|| other.robots().cmp(&self.robots()))
            .then_with(|| self.node.cmp(&other.node))
            .then_with(|| self.paths.cmp(&other.paths))
    }
}

impl PartialOrd for FormationState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// How the robots that continue along an edge are picked when a formation splits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitRule {
    /// The `r` individually cheapest paths (ties by node sequence).
    Cheapest,
    /// Every distinct sub-multiset of `r` paths.
    #[default]
    AllSubsets,
}

fn cheapest_first(a: &Arc<EdgeUsagePath>, b: &Arc<EdgeUsagePath>) -> Ordering {
    a.cost().cmp(&b.cost()).then_with(|| a.nodes().cmp(&b.nodes())).then_with(|| a.cmp(b))
}

/// Distinct sub-multisets of size `r` of the (sorted) `paths`, in lexicographic order.
pub(crate) fn distinct_subsets(paths: &[Arc<EdgeUsagePath>], r: usize) -> Vec<Vec<Arc<EdgeUsagePath>>> {
    // runs of identical paths
    let mut groups: Vec<(&Arc<EdgeUsagePath>, usize)> = Vec::new();
    for p in paths {
        match groups.last_mut() {
            Some((q, n)) if *q == p => *n += 1,
            _ => groups.push((p, 1)),
        }
    }
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(r);
    fn rec(
        groups: &[(&Arc<EdgeUsagePath>, usize)],
        left: usize,
        pick: &mut Vec<Arc<EdgeUsagePath>>,
        out: &mut Vec<Vec<Arc<EdgeUsagePath>>>,
    ) {
        if left == 0 {
            out.push(pick.clone());
            return;
        }
        let Some(((p, n), rest)) = groups.split_first() else {
            return;
        };
        let available: usize = rest.iter().map(|g| g.1).sum();
        for take in (0..=left.min(*n)).rev() {
            if left - take > available {
                break;
            }
            for _ in 0..take {
                pick.push(Arc::clone(p));
            }
            rec(rest, left - take, pick, out);
            pick.truncate(pick.len() - take);
        }
    }
    rec(&groups, r, &mut pick, &mut out);
    out
}

fn advance(graph: &CostGraph, chosen: &[Arc<EdgeUsagePath>], edge: EdgeId, from: VertexId, to: VertexId) -> Option<FormationState> {
    let r = chosen.len();
    if chosen.iter().any(|p| p.visits(to)) {
        return None;
    }
    let count = u16::try_from(r).ok()?;
    let step_cost = graph.use_cost(edge, count).ok()?;
    let step = EdgeUse::new(edge, from, to, count);
    let mut paths: Vec<Arc<EdgeUsagePath>> = Vec::with_capacity(r);
    for p in chosen {
        // identical inputs give identical outputs
        match paths.last() {
            Some(prev) if prev.uses()[..prev.len() - 1] == p.uses()[..] && prev.start() == p.start() => {
                paths.push(Arc::clone(prev))
            }
            _ => paths.push(Arc::new(p.extended(step, step_cost))),
        }
    }
    Some(FormationState::new(to, paths))
}

/// Moves `r` of the robots of `state` along `edge` to the neighbour `to`.
///
/// The cheapest `r` paths continue; every continuing path records `r` as the
/// robot count on the new edge, and prefixes keep their recorded counts.
/// Returns `None` when `r` is out of range, the edge does not leave the
/// state's vertex, or a continuing path already visited `to`.
pub fn extend_state(graph: &CostGraph, state: &FormationState, edge: EdgeId, to: VertexId, r: usize) -> Option<FormationState> {
    extend_state_with(graph, state, edge, to, r, SplitRule::Cheapest).into_iter().next()
}

/// All successors of `state` along `edge` carrying `r` robots under `rule`.
pub fn extend_state_with(
    graph: &CostGraph,
    state: &FormationState,
    edge: EdgeId,
    to: VertexId,
    r: usize,
    rule: SplitRule,
) -> Vec<FormationState> {
    if r == 0 || r > state.robots() {
        return Vec::new();
    }
    let leaves_here = graph.arcs(state.node).iter().any(|l| l.edge == edge && l.to == to);
    if !leaves_here {
        return Vec::new();
    }
    match rule {
        SplitRule::Cheapest => {
            let mut sorted = state.paths.clone();
            sorted.sort_by(cheapest_first);
            sorted.truncate(r);
            sorted.sort();
            advance(graph, &sorted, edge, state.node, to).into_iter().collect()
        }
        SplitRule::AllSubsets => distinct_subsets(&state.paths, r)
            .into_iter()
            .filter_map(|chosen| advance(graph, &chosen, edge, state.node, to))
            .collect(),
    }
}

/// Union of two states at the same vertex if `rules` admit it and the
/// result has at most `max_robots` robots.
pub fn merge_states(a: &FormationState, b: &FormationState, rules: &MergeRules, max_robots: usize) -> Option<FormationState> {
    if a.node != b.node || a.robots() + b.robots() > max_robots {
        return None;
    }
    if !rules.admits(&a.paths, &b.paths) {
        return None;
    }
    let paths = a.paths.iter().chain(&b.paths).cloned().collect();
    Some(FormationState::new(a.node, paths))
}

/// Merges `state` with every stored state at its vertex whose robot count
/// keeps the total within `max_robots`, in table order.
pub fn combine_states<'a, I>(state: &FormationState, table: I, rules: &MergeRules, max_robots: usize) -> Vec<FormationState>
where
    I: IntoIterator<Item = &'a FormationState>,
{
    if state.robots() >= max_robots {
        return Vec::new();
    }
    table
        .into_iter()
        .filter(|t| t.node == state.node && t.robots() <= max_robots - state.robots())
        .filter_map(|t| merge_states(state, t, rules, max_robots))
        .collect()
}
