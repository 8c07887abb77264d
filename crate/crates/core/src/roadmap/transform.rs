use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use super::{Edge, EnvironmentMap, RoadmapGraph, Vertex, VertexId};
use crate::geometry::{Point2, Scalar, Segment};

/// Distance under which a terminal is considered to coincide with a vertex.
pub const COINCIDENCE_TOLERANCE: f64 = 1e-9;

/// Repeatedly removes non-terminal vertices of degree at most one.
pub fn prune_tails<T: Scalar>(graph: &RoadmapGraph<T>) -> RoadmapGraph<T> {
    let mut degree: HashMap<VertexId, usize> = graph.vertices().iter().map(|v| (v.id, graph.degree(v.id))).collect();
    let mut removed = BTreeSet::new();
    let mut stack: Vec<VertexId> = graph
        .vertices()
        .iter()
        .filter(|v| !v.terminal && degree[&v.id] <= 1)
        .map(|v| v.id)
        .rev()
        .collect();
    while let Some(id) = stack.pop() {
        if !removed.insert(id) {
            continue;
        }
        for e in graph.incident_edges(id) {
            let other = e.other(id);
            if removed.contains(&other) {
                continue;
            }
            let d = degree.get_mut(&other).expect("endpoint exists");
            *d -= 1;
            if *d <= 1 && !graph.vertex(other).is_some_and(|v| v.terminal) {
                stack.push(other);
            }
        }
    }
    graph.without_vertices(&removed)
}

/// Replaces every vertex of degree `d > 3` with a chain of `d - 2` vertices
/// joined by zero-cost edges. Chain ends take two of the original edges,
/// interior chain vertices one, assigned in counterclockwise angular order.
/// The first chain vertex keeps the original id; the others record it as
/// their `origin`.
pub fn normalize_degree<T: Scalar>(graph: &RoadmapGraph<T>) -> RoadmapGraph<T> {
    if graph.max_degree() <= 3 {
        return graph.clone();
    }
    let width = graph.cost_width();
    let mut next_vertex = graph.next_vertex_id();
    let mut next_edge = graph.next_edge_id();
    let mut vertices: Vec<Vertex<T>> = graph.vertices().to_vec();
    let mut edges: Vec<Edge<T>> = graph.edges().to_vec();
    let mut zero_edges = Vec::new();

    for v in graph.vertices() {
        let d = graph.degree(v.id);
        if d <= 3 {
            continue;
        }
        let mut incident: Vec<&Edge<T>> = graph.incident_edges(v.id).collect();
        incident.sort_by(|a, b| {
            let ka = angle_key(graph, v, a);
            let kb = angle_key(graph, v, b);
            ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal).then(a.id.cmp(&b.id))
        });

        let mut chain = vec![v.id];
        for _ in 1..(d - 2) {
            let mut extra = Vertex::new(next_vertex, v.position);
            extra.origin = v.origin;
            vertices.push(extra);
            chain.push(next_vertex);
            next_vertex += 1;
        }
        for (k, e) in incident.iter().enumerate() {
            let slot = match k {
                0 | 1 => 0,
                k if k >= d - 2 => d - 3,
                k => k - 1,
            };
            let target = chain[slot];
            let edge = &mut edges[graph.edge_slot(e.id).expect("incident edge exists")];
            if edge.u == v.id {
                edge.u = target;
            } else {
                edge.v = target;
            }
        }
        let clearance = graph.incident_edges(v.id).map(|e| e.clearance).fold(T::infinity(), T::min);
        for pair in chain.windows(2) {
            let mut z = Edge::new(next_edge, pair[0], pair[1], T::zero());
            z.zero_cost = true;
            z.clearance = clearance;
            z.costs = vec![0; width];
            zero_edges.push(z);
            next_edge += 1;
        }
    }
    edges.extend(zero_edges);
    RoadmapGraph::from_parts(vertices, edges).expect("substitution keeps ids unique")
}

fn angle_key<T: Scalar>(graph: &RoadmapGraph<T>, v: &Vertex<T>, e: &Edge<T>) -> f64 {
    let here = v.position;
    let there = graph.vertex(e.other(v.id)).and_then(|w| w.position);
    match (here, there) {
        (Some(a), Some(b)) => {
            let d = b - a;
            d.y.to_f64_lossy().atan2(d.x.to_f64_lossy())
        }
        _ => 0.0,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttachError {
    #[error("terminal point is not in free space")]
    NotInFreeSpace,
    #[error("no collision-free connection from the terminal to the roadmap")]
    NoConnection,
}

/// Inserts `point` as a terminal vertex, connected by a straight edge to the
/// nearest roadmap vertex it can see. A point coinciding with an existing
/// vertex just marks that vertex terminal.
pub fn attach_terminal<T: Scalar>(
    graph: &RoadmapGraph<T>,
    map: &EnvironmentMap<T>,
    point: Point2<T>,
) -> Result<(RoadmapGraph<T>, VertexId), AttachError> {
    let tol = T::from_f64_lossy(COINCIDENCE_TOLERANCE);
    let mut by_distance: Vec<(T, VertexId, Point2<T>)> = graph
        .vertices()
        .iter()
        .filter_map(|v| v.position.map(|p| (p.distance(point), v.id, p)))
        .collect();
    by_distance.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));

    if let Some(&(d, id, _)) = by_distance.first() {
        if d <= tol {
            let mut out = graph.clone();
            out.set_terminal(id, true).expect("vertex exists");
            return Ok((out, id));
        }
    }
    if !map.is_free(point) {
        return Err(AttachError::NotInFreeSpace);
    }
    let (target, target_pos) = by_distance
        .iter()
        .find(|(_, _, p)| map.segment_is_free(&Segment::new(point, *p)))
        .map(|&(_, id, p)| (id, p))
        .ok_or(AttachError::NoConnection)?;

    let mut out = graph.clone();
    let id = out.next_vertex_id();
    let mut vertex = Vertex::new(id, Some(point));
    vertex.terminal = true;
    out.add_vertex(vertex).expect("fresh vertex id");
    let seg = Segment::new(point, target_pos);
    let mut edge = Edge::new(out.next_edge_id(), id, target, seg.length());
    edge.clearance = map.segment_clearance(&seg);
    out.add_edge(edge).expect("fresh edge id");
    if out.degree(target) > 3 {
        out = normalize_degree(&out);
    }
    Ok((out, id))
}
