use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::{Point2, Polygon, PolygonDefect, Scalar, Segment};

/// Which polygon of a map an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolygonRef {
    Border,
    Obstacle(usize),
}

impl fmt::Display for PolygonRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolygonRef::Border => write!(f, "border"),
            PolygonRef::Obstacle(i) => write!(f, "obstacle {i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("malformed map file: {0}")]
    Syntax(String),
    #[error("{polygon}: invalid polygon ({defect:?})")]
    InvalidPolygon { polygon: PolygonRef, defect: PolygonDefect },
    #[error("{polygon}: self-intersecting polygon")]
    SelfIntersecting { polygon: PolygonRef },
    #[error("obstacle {0} outside border")]
    ObstacleOutsideBorder(usize),
    #[error("obstacles {0} and {1} overlap")]
    ObstaclesOverlap(usize, usize),
}

/// Border polygon plus the obstacles inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentMap<T> {
    pub border: Polygon<T>,
    pub obstacles: Vec<Polygon<T>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile<T> {
    border: Vec<[T; 2]>,
    #[serde(default)]
    obstacles: Vec<Vec<[T; 2]>>,
}

fn polygon<T: Scalar>(ring: Vec<[T; 2]>, which: PolygonRef) -> Result<Polygon<T>, MapError> {
    let pts = ring.into_iter().map(|[x, y]| Point2::new(x, y)).collect();
    Polygon::new(pts).map_err(|defect| match defect {
        PolygonDefect::SelfIntersecting => MapError::SelfIntersecting { polygon: which },
        defect => MapError::InvalidPolygon { polygon: which, defect },
    })
}

/// Parses and validates a JSON map file.
pub fn load_environment<T: Scalar>(bytes: &[u8]) -> Result<EnvironmentMap<T>, MapError> {
    let raw: MapFile<T> = serde_json::from_slice(bytes).map_err(|e| MapError::Syntax(e.to_string()))?;
    let border = polygon(raw.border, PolygonRef::Border)?;
    let obstacles = raw
        .obstacles
        .into_iter()
        .enumerate()
        .map(|(i, ring)| polygon(ring, PolygonRef::Obstacle(i)))
        .collect::<Result<Vec<_>, _>>()?;
    EnvironmentMap::new(border, obstacles)
}

impl<T: Scalar> EnvironmentMap<T> {
    pub fn new(border: Polygon<T>, obstacles: Vec<Polygon<T>>) -> Result<Self, MapError> {
        for (i, obs) in obstacles.iter().enumerate() {
            let outside = obs.vertices().iter().any(|&p| !border.contains(p))
                || obs.edges().any(|e| border.edges().any(|b| e.crosses_properly(&b)));
            if outside {
                return Err(MapError::ObstacleOutsideBorder(i));
            }
        }
        for i in 0..obstacles.len() {
            for j in (i + 1)..obstacles.len() {
                if polygons_overlap(&obstacles[i], &obstacles[j]) {
                    return Err(MapError::ObstaclesOverlap(i, j));
                }
            }
        }
        Ok(EnvironmentMap { border, obstacles })
    }

    /// Border area minus obstacle area.
    pub fn free_area(&self) -> T {
        self.obstacles.iter().fold(self.border.area(), |acc, o| acc - o.area())
    }

    pub fn has_free_space(&self) -> bool {
        let total = self.border.area();
        self.free_area() > total * T::from_f64_lossy(1e-9)
    }

    /// Every boundary segment: border first, then obstacles in order.
    pub fn boundary_segments(&self) -> impl Iterator<Item = Segment<T>> + '_ {
        self.border.edges().chain(self.obstacles.iter().flat_map(|o| o.edges()))
    }

    /// Inside the border and outside every obstacle; boundaries are not free.
    pub fn is_free(&self, p: Point2<T>) -> bool {
        self.border.contains_strictly(p)
            && self.border.boundary_distance(p) > T::zero()
            && self.obstacles.iter().all(|o| !o.contains(p))
    }

    /// Distance from `p` to the nearest obstacle or border edge.
    pub fn clearance(&self, p: Point2<T>) -> T {
        self.boundary_segments().map(|s| s.distance_to_point(p)).fold(T::infinity(), T::min)
    }

    pub fn segment_clearance(&self, seg: &Segment<T>) -> T {
        self.boundary_segments().map(|s| s.distance_to_segment(seg)).fold(T::infinity(), T::min)
    }

    /// The segment stays in free space without touching any boundary.
    pub fn segment_is_free(&self, seg: &Segment<T>) -> bool {
        self.is_free(seg.a)
            && self.is_free(seg.b)
            && self.is_free(seg.a.midpoint(seg.b))
            && self.boundary_segments().all(|s| !s.intersects(seg))
    }
}

fn polygons_overlap<T: Scalar>(a: &Polygon<T>, b: &Polygon<T>) -> bool {
    a.edges().any(|e| b.edges().any(|f| e.intersects(&f)))
        || a.vertices().iter().any(|&p| b.contains_strictly(p))
        || b.vertices().iter().any(|&p| a.contains_strictly(p))
}
