//! SVG pictures of maps, roadmaps and plans.

use std::fmt::Write;

use thiserror::Error;

use crate::geometry::{Point2, Polygon, Scalar};
use crate::planner::PlanResult;
use crate::roadmap::{EdgeId, EnvironmentMap, RoadmapGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("no geometry to render")]
    NoGeometry,
    #[error("plan refers to edge {0}, which is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("plan uses edge {edge} from {from} to {to}, which are not its endpoints")]
    WrongEndpoints { edge: EdgeId, from: VertexId, to: VertexId },
}

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 40.0;

struct Frame {
    lo: Point2<f64>,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Point2<f64>]) -> Frame {
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        let scale = (WIDTH - 2.0 * MARGIN) / span;
        let height = (hi.y - lo.y) * scale + 2.0 * MARGIN;
        Frame { lo, scale, height }
    }

    /// Map coordinates to SVG coordinates, y pointing up.
    fn map(&self, p: Point2<f64>) -> (f64, f64) {
        (MARGIN + (p.x - self.lo.x) * self.scale, self.height - MARGIN - (p.y - self.lo.y) * self.scale)
    }
}

fn polygon_points(frame: &Frame, poly: &Polygon<f64>) -> String {
    poly.vertices()
        .iter()
        .map(|&p| {
            let (x, y) = frame.map(p);
            format!("{x:.2},{y:.2}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn cast_polygon<T: Scalar>(poly: &Polygon<T>) -> Polygon<f64> {
    Polygon::new(poly.vertices().iter().map(|p| p.cast()).collect()).expect("a valid polygon stays valid")
}

/// Draws the map (if any), the roadmap, and the plan's edge usage (if any).
///
/// Every non-zero-cost edge carries its cost vector in square brackets; used
/// edges get an arrow in the direction of travel labelled with the number of
/// robots on it.
pub fn render_svg<T: Scalar>(
    graph: &RoadmapGraph<T>,
    map: Option<&EnvironmentMap<T>>,
    plan: Option<&PlanResult>,
) -> Result<String, RenderError> {
    let position = |id: VertexId| graph.vertex(id).and_then(|v| v.position).map(|p| p.cast::<f64>());
    if graph.is_empty() || graph.vertices().iter().any(|v| v.position.is_none()) {
        return Err(RenderError::NoGeometry);
    }
    let border = map.map(|m| cast_polygon(&m.border));
    let obstacles: Vec<Polygon<f64>> = map.map(|m| m.obstacles.iter().map(cast_polygon).collect()).unwrap_or_default();

    let mut points: Vec<Point2<f64>> = graph.vertices().iter().filter_map(|v| position(v.id)).collect();
    if let Some(b) = &border {
        points.extend(b.vertices().iter().copied());
    }
    let frame = Frame::fit(&points);

    if let Some(plan) = plan {
        for u in &plan.edge_usage {
            let e = graph.edge(u.edge).ok_or(RenderError::UnknownEdge(u.edge))?;
            let ends = |a: VertexId, b: VertexId| {
                graph.vertex(a).is_some_and(|v| v.origin == u.from) && graph.vertex(b).is_some_and(|v| v.origin == u.to)
            };
            if !ends(e.u, e.v) && !ends(e.v, e.u) {
                return Err(RenderError::WrongEndpoints { edge: u.edge, from: u.from, to: u.to });
            }
        }
    }

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{:.0}" viewBox="0 0 {WIDTH} {:.2}">"#,
        frame.height, frame.height
    );
    svg.push_str(concat!(
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="8" markerHeight="8" orient="auto">"#,
        r##"<path d="M0,0 L10,5 L0,10 z" fill="#c0392b"/></marker></defs>"##,
        "\n"
    ));
    if let Some(b) = &border {
        let _ = writeln!(svg, r#"<polygon class="border" points="{}" fill="none" stroke="black" stroke-width="2"/>"#, polygon_points(&frame, b));
    }
    for o in &obstacles {
        let _ = writeln!(svg, r##"<polygon class="obstacle" points="{}" fill="#999" stroke="black"/>"##, polygon_points(&frame, o));
    }

    for e in graph.edges() {
        let (Some(a), Some(b)) = (position(e.u), position(e.v)) else { continue };
        let ((x1, y1), (x2, y2)) = (frame.map(a), frame.map(b));
        let _ = writeln!(
            svg,
            r##"<line class="edge" data-edge="{}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#555"/>"##,
            e.id
        );
        if !e.zero_cost && !e.costs.is_empty() {
            let costs = e.costs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(
                svg,
                r##"<text class="costs" x="{:.2}" y="{:.2}" font-size="9" fill="#555">[{costs}]</text>"##,
                (x1 + x2) / 2.0,
                (y1 + y2) / 2.0 + 11.0
            );
        }
    }

    if let Some(plan) = plan {
        for u in &plan.edge_usage {
            let e = graph.edge(u.edge).expect("checked above");
            let (from, to) = if graph.vertex(e.u).is_some_and(|v| v.origin == u.from) { (e.u, e.v) } else { (e.v, e.u) };
            let (Some(a), Some(b)) = (position(from), position(to)) else { continue };
            let ((x1, y1), (x2, y2)) = (frame.map(a), frame.map(b));
            // stop short of the vertex dot
            let len = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt().max(1e-9);
            let cut = (6.0 / len).min(0.4);
            let (sx, sy) = (x1 + (x2 - x1) * cut, y1 + (y2 - y1) * cut);
            let (ex, ey) = (x2 - (x2 - x1) * cut, y2 - (y2 - y1) * cut);
            let _ = writeln!(
                svg,
                r##"<line class="usage" data-edge="{}" x1="{sx:.2}" y1="{sy:.2}" x2="{ex:.2}" y2="{ey:.2}" stroke="#c0392b" stroke-width="{}" marker-end="url(#arrow)"/>"##,
                u.edge,
                1.0 + u.count as f64
            );
            let _ = writeln!(
                svg,
                r##"<text class="count" data-edge="{}" x="{:.2}" y="{:.2}" font-size="13" fill="#c0392b">{}</text>"##,
                u.edge,
                (x1 + x2) / 2.0 + 4.0,
                (y1 + y2) / 2.0 - 4.0,
                u.count
            );
        }
    }

    for v in graph.vertices() {
        let Some(p) = position(v.id) else { continue };
        let (x, y) = frame.map(p);
        let fill = if v.terminal { "#2471a3" } else { "black" };
        let _ = writeln!(svg, r#"<circle class="vertex" cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"/>"#);
        if v.origin == v.id {
            let _ = writeln!(svg, r#"<text class="label" x="{:.2}" y="{:.2}" font-size="12">{}</text>"#, x + 6.0, y - 6.0, v.id);
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
