//! Roadmap graphs: construction from a polygonal map and the transforms that
//! prepare them for planning (tail pruning, degree normalization, terminals).

mod environment;
mod transform;
mod voronoi;

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::geometry::{Point2, Scalar};

pub use environment::{load_environment, EnvironmentMap, MapError, PolygonRef};
pub use transform::{attach_terminal, normalize_degree, prune_tails, AttachError, COINCIDENCE_TOLERANCE};
pub use voronoi::{build_roadmap, RoadmapError};

pub type VertexId = u32;
pub type EdgeId = u32;
/// Integer traversal cost.
pub type Cost = u64;

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex<T> {
    pub id: VertexId,
    pub position: Option<Point2<T>>,
    /// Start/goal vertices survive tail pruning.
    pub terminal: bool,
    /// Vertex this one stands for after degree substitution (itself otherwise).
    pub origin: VertexId,
}

impl<T: Scalar> Vertex<T> {
    pub fn new(id: VertexId, position: Option<Point2<T>>) -> Self {
        Vertex { id, position, terminal: false, origin: id }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<T> {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub length: T,
    /// Smallest distance from the edge to any obstacle or the border.
    pub clearance: T,
    /// Substitution edge inserted by degree normalization.
    pub zero_cost: bool,
    /// `costs[k]` is the cost for `k + 1` robots; empty until evaluated.
    pub costs: Vec<Cost>,
}

impl<T: Scalar> Edge<T> {
    pub fn new(id: EdgeId, u: VertexId, v: VertexId, length: T) -> Self {
        Edge { id, u, v, length, clearance: T::infinity(), zero_cost: false, costs: Vec::new() }
    }

    pub fn other(&self, end: VertexId) -> VertexId {
        if self.u == end {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, vertex: VertexId) -> bool {
        self.u == vertex || self.v == vertex
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {0} is a self-loop")]
    SelfLoop(EdgeId),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    #[error("unknown vertex {0}")]
    NoSuchVertex(VertexId),
}

/// Undirected multigraph with stable external ids.
#[derive(Debug, Clone, Default)]
pub struct RoadmapGraph<T> {
    vertices: Vec<Vertex<T>>,
    edges: Vec<Edge<T>>,
    vertex_index: HashMap<VertexId, usize>,
    edge_index: HashMap<EdgeId, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl<T: Scalar> RoadmapGraph<T> {
    pub fn new() -> Self {
        RoadmapGraph {
            vertices: Vec::new(),
            edges: Vec::new(),
            vertex_index: HashMap::new(),
            edge_index: HashMap::new(),
            adjacency: Vec::new(),
        }
    }

    pub fn from_parts(vertices: Vec<Vertex<T>>, edges: Vec<Edge<T>>) -> Result<Self, GraphError> {
        let mut g = RoadmapGraph::new();
        for v in vertices {
            g.add_vertex(v)?;
        }
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, vertex: Vertex<T>) -> Result<(), GraphError> {
        if self.vertex_index.contains_key(&vertex.id) {
            return Err(GraphError::DuplicateVertex(vertex.id));
        }
        self.vertex_index.insert(vertex.id, self.vertices.len());
        self.vertices.push(vertex);
        self.adjacency.push(Vec::new());
        Ok(())
    }

    pub fn add_edge(&mut self, edge: Edge<T>) -> Result<(), GraphError> {
        if self.edge_index.contains_key(&edge.id) {
            return Err(GraphError::DuplicateEdge(edge.id));
        }
        if edge.u == edge.v {
            return Err(GraphError::SelfLoop(edge.id));
        }
        let mut ends = [0usize; 2];
        for (slot, vid) in ends.iter_mut().zip([edge.u, edge.v]) {
            *slot = *self
                .vertex_index
                .get(&vid)
                .ok_or(GraphError::UnknownVertex { edge: edge.id, vertex: vid })?;
        }
        let idx = self.edges.len();
        self.edge_index.insert(edge.id, idx);
        self.edges.push(edge);
        self.adjacency[ends[0]].push(idx);
        self.adjacency[ends[1]].push(idx);
        Ok(())
    }

    pub fn vertices(&self) -> &[Vertex<T>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn edges_mut(&mut self) -> impl Iterator<Item = &mut Edge<T>> {
        self.edges.iter_mut()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex<T>> {
        self.vertex_index.get(&id).map(|&i| &self.vertices[i])
    }

    pub fn vertex_mut(&mut self, id: VertexId) -> Option<&mut Vertex<T>> {
        self.vertex_index.get(&id).map(|&i| &mut self.vertices[i])
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge<T>> {
        self.edge_index.get(&id).map(|&i| &self.edges[i])
    }

    pub fn contains_vertex(&self, id: VertexId) -> bool {
        self.vertex_index.contains_key(&id)
    }

    /// Position of `id` inside [`Self::vertices`].
    pub fn vertex_slot(&self, id: VertexId) -> Option<usize> {
        self.vertex_index.get(&id).copied()
    }

    /// Position of `id` inside [`Self::edges`].
    pub fn edge_slot(&self, id: EdgeId) -> Option<usize> {
        self.edge_index.get(&id).copied()
    }

    pub fn incident_edges(&self, id: VertexId) -> impl Iterator<Item = &Edge<T>> + '_ {
        let slots = self.vertex_index.get(&id).map(|&i| self.adjacency[i].as_slice()).unwrap_or(&[]);
        slots.iter().map(move |&e| &self.edges[e])
    }

    pub fn degree(&self, id: VertexId) -> usize {
        self.vertex_index.get(&id).map_or(0, |&i| self.adjacency[i].len())
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn next_vertex_id(&self) -> VertexId {
        self.vertices.iter().map(|v| v.id + 1).max().unwrap_or(0)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.iter().map(|e| e.id + 1).max().unwrap_or(0)
    }

    pub fn set_terminal(&mut self, id: VertexId, terminal: bool) -> Result<(), GraphError> {
        let v = self.vertex_mut(id).ok_or(GraphError::NoSuchVertex(id))?;
        v.terminal = terminal;
        Ok(())
    }

    /// Length of the longest cost vector (0 when no edge was evaluated).
    pub fn cost_width(&self) -> usize {
        self.edges.iter().map(|e| e.costs.len()).max().unwrap_or(0)
    }

    /// Copy of the graph without the given vertices and their incident edges.
    pub fn without_vertices(&self, removed: &BTreeSet<VertexId>) -> Self {
        let vertices = self.vertices.iter().filter(|v| !removed.contains(&v.id)).cloned().collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| !removed.contains(&e.u) && !removed.contains(&e.v))
            .cloned()
            .collect();
        RoadmapGraph::from_parts(vertices, edges).expect("subgraph of a valid graph")
    }

    /// Connected components as sorted vertex-id sets, largest first.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            let mut comp = Vec::new();
            while let Some(i) = queue.pop_front() {
                comp.push(self.vertices[i].id);
                for &e in &self.adjacency[i] {
                    let w = self.vertex_index[&self.edges[e].other(self.vertices[i].id)];
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn largest_component(&self) -> Self {
        let comps = self.components();
        if comps.len() <= 1 {
            return self.clone();
        }
        let keep: BTreeSet<VertexId> = comps[0].iter().copied().collect();
        let removed = self.vertices.iter().map(|v| v.id).filter(|id| !keep.contains(id)).collect();
        self.without_vertices(&removed)
    }
}
