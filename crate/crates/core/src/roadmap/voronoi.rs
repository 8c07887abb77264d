//! Medial-axis roadmap approximated from the point-site Voronoi diagram of
//! densely sampled map boundaries.

use std::collections::{HashMap, HashSet};

use spade::handles::VoronoiVertex;
use spade::{DelaunayTriangulation, HasPosition, Triangulation};
use thiserror::Error;

use super::{Edge, EdgeId, EnvironmentMap, RoadmapGraph, Vertex, VertexId};
use crate::geometry::{Point2, Scalar, Segment};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RoadmapError {
    #[error("sampling step must be positive and finite")]
    InvalidStep,
    #[error("free space empty")]
    FreeSpaceEmpty,
    #[error("resulting roadmap is empty")]
    EmptyRoadmap,
    #[error("triangulation failed: {0}")]
    Triangulation(String),
}

/// A boundary sample tagged with the segment(s) it was taken from.
struct Site {
    position: spade::Point2<f64>,
    /// Global segment indices; polygon corners belong to both adjacent segments.
    segments: [usize; 2],
}

impl HasPosition for Site {
    type Scalar = f64;
    fn position(&self) -> spade::Point2<f64> {
        self.position
    }
}

impl Site {
    fn shares_segment(&self, other: &Site) -> bool {
        self.segments.iter().any(|s| other.segments.contains(s))
    }
}

fn sample_boundaries(map: &EnvironmentMap<f64>, step: f64) -> Vec<Site> {
    let mut sites = Vec::new();
    let mut offset = 0;
    for poly in std::iter::once(&map.border).chain(&map.obstacles) {
        let n = poly.len();
        for (i, seg) in poly.edges().enumerate() {
            let global = offset + i;
            let prev = offset + (i + n - 1) % n;
            sites.push(Site { position: spade::Point2::new(seg.a.x, seg.a.y), segments: [prev, global] });
            let pieces = (seg.length() / step).ceil().max(1.0) as usize;
            for k in 1..pieces {
                let p = seg.a.lerp(seg.b, k as f64 / pieces as f64);
                sites.push(Site { position: spade::Point2::new(p.x, p.y), segments: [global, global] });
            }
        }
        offset += n;
    }
    sites
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Builds the Voronoi-style roadmap of `map`.
///
/// Boundaries are sampled at spacing at most `sampling_step`, the samples are
/// Delaunay-triangulated, and the dual Voronoi edges are kept when they lie in
/// free space with clearance at least `min_clearance` and separate samples of
/// different boundary segments. The largest connected component is returned.
pub fn build_roadmap<T: Scalar>(
    map: &EnvironmentMap<T>,
    sampling_step: T,
    min_clearance: T,
) -> Result<RoadmapGraph<T>, RoadmapError> {
    let step = sampling_step.to_f64_lossy();
    if !(step > 0.0 && step.is_finite()) {
        return Err(RoadmapError::InvalidStep);
    }
    if !map.has_free_space() {
        return Err(RoadmapError::FreeSpaceEmpty);
    }
    let map64 = cast_map(map);
    let min_clearance = min_clearance.to_f64_lossy().max(0.0);

    let mut dt: DelaunayTriangulation<Site> = DelaunayTriangulation::new();
    for site in sample_boundaries(&map64, step) {
        dt.insert(site).map_err(|e| RoadmapError::Triangulation(format!("{e:?}")))?;
    }

    let (lo, hi) = map64.border.bounds();
    let merge_tol = 1e-9 * lo.distance(hi).max(1.0);

    // Voronoi vertices are circumcenters of inner faces; nearly coincident
    // ones (cocircular samples) are merged.
    let face_count = dt.num_inner_faces();
    let mut uf = UnionFind((0..face_count).collect());
    let mut candidates = Vec::new();
    for vedge in dt.undirected_voronoi_edges() {
        let [from, to] = vedge.vertices();
        let (VoronoiVertex::Inner(fa), VoronoiVertex::Inner(fb)) = (from, to) else {
            continue;
        };
        let (ia, ib) = (fa.fix().index() - 1, fb.fix().index() - 1);
        let (ca, cb) = (fa.circumcenter(), fb.circumcenter());
        let (pa, pb) = (Point2::new(ca.x, ca.y), Point2::new(cb.x, cb.y));
        if pa.distance(pb) <= merge_tol {
            uf.union(ia, ib);
            continue;
        }
        let [s, t] = vedge.as_delaunay_edge().vertices();
        if s.data().shares_segment(t.data()) {
            continue;
        }
        candidates.push((ia, ib, pa, pb));
    }

    let mut ids: HashMap<usize, VertexId> = HashMap::new();
    let mut vertices: Vec<Vertex<T>> = Vec::new();
    let mut edges: Vec<Edge<T>> = Vec::new();
    let mut seen_pairs = HashSet::new();
    for (ia, ib, pa, pb) in candidates {
        let (ra, rb) = (uf.find(ia), uf.find(ib));
        if ra == rb || !seen_pairs.insert((ra.min(rb), ra.max(rb))) {
            continue;
        }
        let seg = Segment::new(pa, pb);
        if !map64.segment_is_free(&seg) {
            continue;
        }
        let clearance = map64.segment_clearance(&seg);
        if clearance <= 0.0 || clearance < min_clearance {
            continue;
        }
        let mut endpoint = |root: usize, p: Point2<f64>| {
            *ids.entry(root).or_insert_with(|| {
                let id = vertices.len() as VertexId;
                vertices.push(Vertex::new(id, Some(p.cast())));
                id
            })
        };
        let (u, v) = (endpoint(ra, pa), endpoint(rb, pb));
        let mut edge = Edge::new(edges.len() as EdgeId, u, v, T::from_f64_lossy(seg.length()));
        edge.clearance = T::from_f64_lossy(clearance);
        edges.push(edge);
    }

    let graph = RoadmapGraph::from_parts(vertices, edges).expect("fresh ids are unique");
    let graph = graph.largest_component();
    if graph.edge_count() == 0 {
        return Err(RoadmapError::EmptyRoadmap);
    }
    Ok(graph)
}

fn cast_map<T: Scalar>(map: &EnvironmentMap<T>) -> EnvironmentMap<f64> {
    let cast = |p: &crate::geometry::Polygon<T>| {
        crate::geometry::Polygon::new(p.vertices().iter().map(|v| v.cast()).collect())
            .expect("validated polygon stays valid")
    };
    EnvironmentMap { border: cast(&map.border), obstacles: map.obstacles.iter().map(cast).collect() }
}
