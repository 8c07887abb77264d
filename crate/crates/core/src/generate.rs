//! Seeded random test graphs: connected, planar-ish, degree at most 3, with
//! linear cost vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point2, Segment};
use crate::roadmap::{Cost, Edge, EdgeId, RoadmapGraph, Vertex, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenParams {
    pub vertices: usize,
    pub robots: usize,
    /// Chance that an admissible extra edge is kept.
    pub extra_edge_probability: f64,
    /// Side of the square the vertices are drawn from.
    pub extent: f64,
}

impl GenParams {
    pub fn new(vertices: usize, robots: usize) -> Self {
        GenParams { vertices, robots, extra_edge_probability: 0.6, extent: 1000.0 }
    }
}

const MAX_DEGREE: usize = 3;

/// Random graph with vertex ids `1..=n`; identical seeds give identical graphs.
pub fn generate(seed: u64, params: &GenParams) -> RoadmapGraph<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = params.vertices;
    let points: Vec<Point2<f64>> =
        (0..n).map(|_| Point2::new(rng.gen_range(0.0..params.extent), rng.gen_range(0.0..params.extent))).collect();

    let mut degree = vec![0usize; n];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    // spanning tree: each vertex joins the nearest earlier vertex with a free slot
    for i in 1..n {
        let j = (0..i)
            .filter(|&j| degree[j] < MAX_DEGREE)
            .min_by(|&a, &b| points[i].distance(points[a]).total_cmp(&points[i].distance(points[b])))
            .expect("a tree always has a vertex of degree below 3");
        pairs.push((j, i));
        degree[i] += 1;
        degree[j] += 1;
    }

    let mut candidates: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|p| !pairs.contains(p)).collect();
    candidates.sort_by(|&(a, b), &(c, d)| points[a].distance(points[b]).total_cmp(&points[c].distance(points[d])));
    for (a, b) in candidates {
        if degree[a] >= MAX_DEGREE || degree[b] >= MAX_DEGREE {
            continue;
        }
        let seg = Segment::new(points[a], points[b]);
        let crosses = pairs.iter().any(|&(c, d)| {
            let shares = c == a || c == b || d == a || d == b;
            !shares && seg.intersects(&Segment::new(points[c], points[d]))
        });
        if crosses || !rng.gen_bool(params.extra_edge_probability) {
            continue;
        }
        pairs.push((a, b));
        degree[a] += 1;
        degree[b] += 1;
    }

    let vertices = (0..n).map(|i| Vertex::new(i as VertexId + 1, Some(points[i]))).collect();
    let edges = pairs
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| {
            let base: f64 = rng.gen_range(20.0..160.0);
            let slope: f64 = rng.gen_range(5.0..70.0);
            let mut e = Edge::new(k as EdgeId, a as VertexId + 1, b as VertexId + 1, points[a].distance(points[b]));
            e.costs = (1..=params.robots).map(|r| (base + r as f64 * slope).trunc() as Cost).collect();
            e
        })
        .collect();
    RoadmapGraph::from_parts(vertices, edges).expect("generated ids are unique")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_and_bounded() {
        for seed in 0..50 {
            for n in [2, 6, 10, 30] {
                let g = generate(seed, &GenParams::new(n, 3));
                assert_eq!(g.vertex_count(), n);
                assert!(g.is_connected(), "seed {seed} n {n}");
                assert!(g.max_degree() <= 3, "seed {seed} n {n}");
                assert!(g.edges().iter().all(|e| e.costs.len() == 3 && e.costs.windows(2).all(|w| w[0] <= w[1])));
            }
        }
    }

    #[test]
    fn deterministic() {
        let a = generate(7, &GenParams::new(12, 4));
        let b = generate(7, &GenParams::new(12, 4));
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn single_vertex() {
        let g = generate(1, &GenParams::new(1, 2));
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }
}
