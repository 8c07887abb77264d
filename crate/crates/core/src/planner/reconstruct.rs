use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::path::{CostGraph, DirectedEdge, EdgeUsagePath};
use super::search::OptimalPathSet;
use crate::roadmap::{Cost, EdgeId, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobotPlan {
    pub nodes: Vec<VertexId>,
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeUsage {
    pub edge: EdgeId,
    pub from: VertexId,
    pub to: VertexId,
    pub count: u16,
}

/// Paths of one formation to one goal, in original vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanResult {
    pub formation_cost: Cost,
    /// Most expensive robot first.
    pub robots: Vec<RobotPlan>,
    pub edge_usage: Vec<EdgeUsage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("no plan reaches vertex {goal} with {robots} robots")]
    Unreachable { goal: VertexId, robots: usize },
}

fn original_nodes(graph: &CostGraph, path: &EdgeUsagePath) -> Vec<VertexId> {
    let mut nodes: Vec<VertexId> = path.nodes().into_iter().map(|v| graph.origin(v)).collect();
    nodes.dedup();
    nodes
}

/// Extracts the plan for `robots` robots arriving at `goal`.
pub fn reconstruct(result: &OptimalPathSet, goal: VertexId, robots: usize) -> Result<PlanResult, ReconstructError> {
    let state = result.get(goal, robots).ok_or(ReconstructError::Unreachable { goal, robots })?;
    let graph = result.graph();
    let mut plans: Vec<RobotPlan> = state
        .paths()
        .iter()
        .map(|p| RobotPlan { nodes: original_nodes(graph, p), cost: p.cost() })
        .collect();
    plans.sort_by(|a, b| b.cost.cmp(&a.cost).then_with(|| a.nodes.cmp(&b.nodes)));

    let mut usage: BTreeMap<DirectedEdge, u16> = BTreeMap::new();
    for p in state.paths() {
        for u in p.uses() {
            if !graph.is_zero_cost(u.edge) {
                usage.insert(u.key(), u.count);
            }
        }
    }
    let edge_usage = usage
        .into_iter()
        .map(|(k, count)| EdgeUsage { edge: k.edge, from: graph.origin(k.from), to: graph.origin(k.to), count })
        .collect();
    Ok(PlanResult { formation_cost: state.cost(), robots: plans, edge_usage })
}
