//! Split/merge extension of Dijkstra's algorithm over formation states.

mod path;
mod reconstruct;
mod rules;
mod search;
mod state;
mod table;

pub use path::{
    robot_path_cost, state_cost, CostGraph, DirectedEdge, EdgeUsagePath, EdgeUse, GraphViewError, PathError,
};
pub use reconstruct::{reconstruct, EdgeUsage, PlanResult, ReconstructError, RobotPlan};
pub use rules::{capacity_rule, cross_edges_rule, shared_edges_rule, shared_nodes_rule, MergeRules};
pub use search::{
    plan, plan_on, OptimalPathSet, PlanError, PlanOptions, PlanStats, PopRecord, DEFAULT_MAX_STATES,
};
pub use state::{combine_states, extend_state, extend_state_with, merge_states, FormationState, SplitRule};
