//! Map to planner-ready roadmap in one call.

use thiserror::Error;

use crate::geometry::{Point2, Scalar};
use crate::roadmap::{
    attach_terminal, build_roadmap, normalize_degree, prune_tails, AttachError, EnvironmentMap, RoadmapError,
    RoadmapGraph, VertexId,
};

#[derive(Debug, Clone, PartialEq)]
pub struct BuildParams<T> {
    pub sampling_step: T,
    pub min_clearance: T,
    /// Start and goal positions; each becomes a terminal vertex.
    pub terminals: Vec<Point2<T>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BuildError {
    #[error("roadmap: {0}")]
    Roadmap(#[from] RoadmapError),
    #[error("terminal {index}: {source}")]
    Terminal { index: usize, source: AttachError },
}

#[derive(Debug, Clone)]
pub struct BuiltGraph<T> {
    pub graph: RoadmapGraph<T>,
    /// Vertex ids of the terminals, in input order.
    pub terminals: Vec<VertexId>,
}

/// Roadmap, terminals, tail pruning, degree normalization. Cost vectors are
/// left to [`crate::costmodel::build_cost_vectors`], since some models need
/// the final edge lengths.
///
/// Terminals are attached before pruning so that the tails leading to them
/// survive.
pub fn build_graph<T: Scalar>(map: &EnvironmentMap<T>, params: &BuildParams<T>) -> Result<BuiltGraph<T>, BuildError> {
    let mut graph = build_roadmap(map, params.sampling_step, params.min_clearance)?;
    let mut terminals = Vec::with_capacity(params.terminals.len());
    for (index, &p) in params.terminals.iter().enumerate() {
        let (g, id) = attach_terminal(&graph, map, p).map_err(|source| BuildError::Terminal { index, source })?;
        graph = g;
        terminals.push(id);
    }
    let graph = normalize_degree(&prune_tails(&graph));
    Ok(BuiltGraph { graph, terminals })
}
