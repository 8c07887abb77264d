//! JSON graph files.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Point2, Scalar};
use crate::roadmap::{Cost, Edge, EdgeId, GraphError, RoadmapGraph, Vertex, VertexId};

/// The eight-vertex example graph with cost vectors for up to ten robots.
pub const EIGHT_NODE_FIXTURE: &str = include_str!("../fixtures/eight_node.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: VertexId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(default)]
    pub terminal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    #[serde(default)]
    pub costs: Vec<Cost>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clearance: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub zero_cost: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error("graph file syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("vertex {0} has only one coordinate")]
    PartialPosition(VertexId),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(VertexId),
    #[error("edge {0} has a negative or non-finite length or clearance")]
    BadMeasure(EdgeId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl GraphFile {
    pub fn from_graph<T: Scalar>(graph: &RoadmapGraph<T>) -> Self {
        let vertices = graph
            .vertices()
            .iter()
            .map(|v| VertexRecord {
                id: v.id,
                x: v.position.map(|p| p.x.to_f64_lossy()),
                y: v.position.map(|p| p.y.to_f64_lossy()),
                terminal: v.terminal,
                origin: (v.origin != v.id).then_some(v.origin),
            })
            .collect();
        let edges = graph
            .edges()
            .iter()
            .map(|e| EdgeRecord {
                id: e.id,
                u: e.u,
                v: e.v,
                costs: e.costs.clone(),
                length: Some(e.length.to_f64_lossy()),
                clearance: e.clearance.is_finite().then(|| e.clearance.to_f64_lossy()),
                zero_cost: e.zero_cost,
            })
            .collect();
        GraphFile { vertices, edges }
    }

    /// Missing lengths are taken from vertex positions when both are known, zero otherwise.
    pub fn into_graph<T: Scalar>(self) -> Result<RoadmapGraph<T>, GraphFileError> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for r in &self.vertices {
            let position = match (r.x, r.y) {
                (Some(x), Some(y)) if x.is_finite() && y.is_finite() => {
                    Some(Point2::new(T::from_f64_lossy(x), T::from_f64_lossy(y)))
                }
                (Some(_), Some(_)) => return Err(GraphFileError::NonFinite(r.id)),
                (None, None) => None,
                _ => return Err(GraphFileError::PartialPosition(r.id)),
            };
            let mut v = Vertex::new(r.id, position);
            v.terminal = r.terminal;
            v.origin = r.origin.unwrap_or(r.id);
            vertices.push(v);
        }
        let position = |id: VertexId| vertices.iter().find(|v| v.id == id).and_then(|v| v.position);
        let mut edges = Vec::with_capacity(self.edges.len());
        for r in self.edges {
            let length = match r.length {
                Some(l) if l.is_finite() && l >= 0.0 => T::from_f64_lossy(l),
                Some(_) => return Err(GraphFileError::BadMeasure(r.id)),
                None if r.zero_cost => T::zero(),
                None => match (position(r.u), position(r.v)) {
                    (Some(a), Some(b)) => a.distance(b),
                    _ => T::zero(),
                },
            };
            let mut e = Edge::new(r.id, r.u, r.v, length);
            if let Some(c) = r.clearance {
                if c.is_nan() || c < 0.0 {
                    return Err(GraphFileError::BadMeasure(r.id));
                }
                e.clearance = T::from_f64_lossy(c);
            }
            e.zero_cost = r.zero_cost;
            e.costs = r.costs;
            edges.push(e);
        }
        Ok(RoadmapGraph::from_parts(vertices, edges)?)
    }
}

pub fn read_graph<T: Scalar>(bytes: &[u8]) -> Result<RoadmapGraph<T>, GraphFileError> {
    serde_json::from_slice::<GraphFile>(bytes)?.into_graph()
}

pub fn write_graph<T: Scalar>(graph: &RoadmapGraph<T>) -> String {
    serde_json::to_string_pretty(&GraphFile::from_graph(graph)).expect("graph records serialize")
}

/// The bundled eight-vertex example.
pub fn eight_node_graph<T: Scalar>() -> RoadmapGraph<T> {
    read_graph(EIGHT_NODE_FIXTURE.as_bytes()).expect("bundled fixture is valid")
}
