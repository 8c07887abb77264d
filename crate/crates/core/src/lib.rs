//! Formation path planning on roadmap graphs.
//!
//! A team of robots leaves one start vertex and may split into smaller
//! groups and merge again; an edge costs more the more robots cross it
//! together. [`planner::plan`] finds the cheapest worst-robot cost to every
//! vertex for every group size, and [`oracle`] checks it by exhaustion on
//! small graphs.

pub mod build;
pub mod costmodel;
pub mod generate;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod planner;
pub mod render;
pub mod roadmap;

pub use geometry::Scalar;
pub use roadmap::{Cost, EdgeId, VertexId};

pub type Point = geometry::Point2<f64>;
pub type Polygon = geometry::Polygon<f64>;
pub type Map = roadmap::EnvironmentMap<f64>;
pub type Roadmap = roadmap::RoadmapGraph<f64>;
pub type CostModel = costmodel::CostModelSpec<f64>;

pub type Point32 = geometry::Point2<f32>;
pub type Polygon32 = geometry::Polygon<f32>;
pub type Map32 = roadmap::EnvironmentMap<f32>;
pub type Roadmap32 = roadmap::RoadmapGraph<f32>;
pub type CostModel32 = costmodel::CostModelSpec<f32>;
