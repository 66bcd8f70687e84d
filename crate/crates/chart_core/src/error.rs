use thiserror::Error;

/// Failures raised by chart-level operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ChartError {
    #[error("chart dimension {0} outside the supported range 2..=4")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate at slot {slot}")]
    NonFiniteCoordinate { slot: usize },
    #[error("point {point:?} lies outside the chart domain")]
    OutsideDomain { point: Vec<f64> },
    #[error("finite-difference stencil point {stencil:?} (axis {axis}, step {step:e}) leaves the chart domain")]
    DomainEscape {
        stencil: Vec<f64>,
        axis: usize,
        step: f64,
    },
    #[error("metric is singular: |det| = {det:e} below threshold {threshold:e}")]
    SingularMetric { det: f64, threshold: f64 },
    #[error("metric is not symmetric: |g[{i}][{j}] - g[{j}][{i}]| = {gap:e}")]
    AsymmetricMetric { i: usize, j: usize, gap: f64 },
    #[error("variance mismatch: {0}")]
    VarianceMismatch(String),
    #[error("volume density is not positive ({value:e}) at {point:?}")]
    NonpositiveVolume { value: f64, point: Vec<f64> },
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("non-finite tensor component produced at {point:?}")]
    NonFiniteComponent { point: Vec<f64> },
}
