use thiserror::Error;

use crate::quadrature::QuadratureResult;

/// Everything that can go wrong while building geometry or evaluating an
/// invariant.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("curve is not immersed at t = {parameter} (speed {speed:e})")]
    ImmersionFailure { parameter: f64, speed: f64 },

    #[error("unknown builtin family `{0}`")]
    UnknownFamily(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("images are not disjoint: sampled distance {distance:e}{}", lambda_suffix(*.lambda))]
    DisjointnessViolation { distance: f64, lambda: Option<f64> },

    #[error("integrand is not finite at node {node:?}")]
    NonFiniteSample { node: Vec<f64> },

    #[error(
        "tolerance not reached: best value {} with error estimate {:e} at {:?} nodes",
        .best.value, .best.error_estimate, .best.nodes_per_dim
    )]
    ToleranceNotReached { best: QuadratureResult },

    #[error("point lies on the curve (distance {distance:e})")]
    PointOnCurve { distance: f64 },

    #[error("point lies on the polyline boundary")]
    PointOnBoundary,

    #[error("intersection is not transverse near parameter {parameter:?} (derivative {derivative:e})")]
    NonTransverse { parameter: Vec<f64>, derivative: f64 },

    #[error("slice contour runs into a non-periodic chart boundary near {at:?}")]
    OpenContour { at: [f64; 2] },

    #[error("object does not lie in the hyperplane (deviation {deviation:e})")]
    NotInHyperplane { deviation: f64 },

    #[error("projection direction is not generic: {0}")]
    NonGenericProjection(String),

    #[error("scene file: {0}")]
    SceneFormat(String),
}

fn lambda_suffix(lambda: Option<f64>) -> String {
    match lambda {
        Some(l) => format!(" at lambda = {l}"),
        None => String::new(),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
