use chart_core::ChartError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConnectionError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("cubic tensor violates {symmetry} at {point:?}: component ({k},{i},{j}) off by {magnitude:e}")]
    CubicSymmetryViolation {
        symmetry: &'static str,
        k: usize,
        i: usize,
        j: usize,
        magnitude: f64,
        point: Vec<f64>,
    },
    #[error("bundle invariant '{invariant}' fails at {point:?}: relative residual {residual:e}")]
    InvariantViolation {
        invariant: &'static str,
        residual: f64,
        point: Vec<f64>,
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}
