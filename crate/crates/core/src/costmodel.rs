//! Per-edge cost vectors indexed by the number of robots crossing together.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::Scalar;
use crate::roadmap::{Cost, Edge, EdgeId, RoadmapGraph};

/// Costs `c_1..c_R`; entry `k` is the cost for `k + 1` robots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CostVector(pub Vec<Cost>);

impl CostVector {
    pub fn robots(&self) -> usize {
        self.0.len()
    }

    /// Cost for `r` robots (1-based).
    pub fn get(&self, r: usize) -> Option<Cost> {
        r.checked_sub(1).and_then(|k| self.0.get(k)).copied()
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }
}

/// `cost(r) = trunc(base + r * slope)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCoefficients<T> {
    pub base: T,
    pub slope: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CostModelKind<T> {
    /// Use the vectors already stored on the edges.
    Explicit,
    /// Per-edge linear coefficients.
    Linear(BTreeMap<EdgeId, LinearCoefficients<T>>),
    /// `trunc(length * (1 + alpha * r * width / clearance))`.
    Clearance { alpha: T, width: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostModelSpec<T> {
    pub kind: CostModelKind<T>,
    /// Added to every entry for fewer than `R` robots.
    pub split_penalty: Cost,
}

impl<T: Scalar> CostModelSpec<T> {
    pub fn explicit() -> Self {
        CostModelSpec { kind: CostModelKind::Explicit, split_penalty: 0 }
    }

    pub fn linear(coefficients: BTreeMap<EdgeId, LinearCoefficients<T>>) -> Self {
        CostModelSpec { kind: CostModelKind::Linear(coefficients), split_penalty: 0 }
    }

    /// Linear model whose coefficients scale with each edge's length.
    pub fn linear_per_length(graph: &RoadmapGraph<T>, base_per_length: T, slope_per_length: T) -> Self {
        let coefficients = graph
            .edges()
            .iter()
            .map(|e| (e.id, LinearCoefficients { base: e.length * base_per_length, slope: e.length * slope_per_length }))
            .collect();
        Self::linear(coefficients)
    }

    pub fn clearance(alpha: T, width: T) -> Self {
        CostModelSpec { kind: CostModelKind::Clearance { alpha, width }, split_penalty: 0 }
    }

    pub fn with_split_penalty(mut self, penalty: Cost) -> Self {
        self.split_penalty = penalty;
        self
    }

    pub fn validate(&self) -> Result<(), CostError> {
        match &self.kind {
            CostModelKind::Explicit => Ok(()),
            CostModelKind::Linear(coefficients) => {
                if coefficients.values().all(|c| c.base.is_finite() && c.slope.is_finite()) {
                    Ok(())
                } else {
                    Err(CostError::InvalidParameters("linear coefficients must be finite"))
                }
            }
            CostModelKind::Clearance { alpha, width } => {
                if !alpha.is_finite() || *alpha < T::zero() {
                    Err(CostError::InvalidParameters("alpha must be finite and non-negative"))
                } else if !width.is_finite() || *width <= T::zero() {
                    Err(CostError::InvalidParameters("width must be finite and positive"))
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostError {
    #[error("invalid cost model: {0}")]
    InvalidParameters(&'static str),
    #[error("edge {edge}: robot count {robots} outside 1..={max}")]
    RobotCount { edge: EdgeId, robots: usize, max: usize },
    #[error("edge {0}: degenerate clearance")]
    DegenerateClearance(EdgeId),
    #[error("edge {0}: no linear coefficients")]
    MissingCoefficients(EdgeId),
    #[error("edge {edge}: explicit cost vector has {len} entries, need {needed}")]
    ShortVector { edge: EdgeId, len: usize, needed: usize },
    #[error("edge {edge}: cost {value} is negative or not finite")]
    InvalidCost { edge: EdgeId, value: f64 },
}

fn truncate<T: Scalar>(edge: EdgeId, value: T) -> Result<Cost, CostError> {
    let v = value.trunc();
    match num_traits::cast::<T, Cost>(v) {
        Some(c) if value.is_finite() => Ok(c),
        _ => Err(CostError::InvalidCost { edge, value: value.to_f64_lossy() }),
    }
}

/// Integer cost for `r` robots crossing `edge` together, truncated toward zero.
pub fn evaluate_edge_cost<T: Scalar>(edge: &Edge<T>, r: usize, model: &CostModelSpec<T>) -> Result<Cost, CostError> {
    if r == 0 {
        return Err(CostError::RobotCount { edge: edge.id, robots: r, max: usize::MAX });
    }
    if edge.zero_cost {
        return Ok(0);
    }
    let r_t = T::from_usize(r).expect("robot count fits the scalar");
    match &model.kind {
        CostModelKind::Explicit => edge.costs.get(r - 1).copied().ok_or(CostError::RobotCount {
            edge: edge.id,
            robots: r,
            max: edge.costs.len(),
        }),
        CostModelKind::Linear(coefficients) => {
            let c = coefficients.get(&edge.id).ok_or(CostError::MissingCoefficients(edge.id))?;
            truncate(edge.id, c.base + r_t * c.slope)
        }
        CostModelKind::Clearance { alpha, width } => {
            if edge.clearance <= T::zero() {
                return Err(CostError::DegenerateClearance(edge.id));
            }
            truncate(edge.id, edge.length * (T::one() + *alpha * r_t * *width / edge.clearance))
        }
    }
}

/// Raises the entries for fewer than `robots` robots by `penalty`.
pub fn apply_split_penalty(vector: &CostVector, penalty: Cost, robots: usize) -> CostVector {
    CostVector(
        vector
            .0
            .iter()
            .enumerate()
            .map(|(k, &c)| if k + 1 < robots { c + penalty } else { c })
            .collect(),
    )
}

/// Returns a copy of `graph` where every edge carries a cost vector of length `robots`.
pub fn build_cost_vectors<T: Scalar>(
    graph: &RoadmapGraph<T>,
    model: &CostModelSpec<T>,
    robots: usize,
) -> Result<RoadmapGraph<T>, CostError> {
    if robots == 0 {
        return Err(CostError::InvalidParameters("robot count must be at least 1"));
    }
    model.validate()?;
    let mut out = graph.clone();
    for edge in out.edges_mut() {
        if matches!(model.kind, CostModelKind::Explicit) && !edge.zero_cost && edge.costs.len() < robots {
            return Err(CostError::ShortVector { edge: edge.id, len: edge.costs.len(), needed: robots });
        }
        let raw = (1..=robots)
            .map(|r| evaluate_edge_cost(edge, r, model))
            .collect::<Result<Vec<_>, _>>()?;
        let vector = apply_split_penalty(&CostVector(raw), if edge.zero_cost { 0 } else { model.split_penalty }, robots);
        if !vector.is_non_decreasing() {
            log::warn!("edge {}: cost vector {:?} decreases with formation size", edge.id, vector.0);
        }
        edge.costs = vector.0;
    }
    Ok(out)
}
