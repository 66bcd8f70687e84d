//! Chart-level numerics: points and domains, dense tensor components,
//! Taylor jets, central finite differences, pointwise metric algebra,
//! residual bookkeeping and quasi-random sampling.

pub mod error;
pub mod field;
pub mod jet;
pub mod metric;
pub mod point;
pub mod residual;
pub mod sampling;
pub mod tensor;

pub use error::ChartError;
pub use field::{
    axis_step, default_base_step, gradient_with_step, partial_derivative,
    partial_derivative_with_step, ChartField, SmoothField, DEFAULT_BASE_STEP, STEP_ENV_VAR,
};
pub use jet::{invert_with_det, Jet1, Jet2, Scalar, MAX_DIM};
pub use metric::{
    log_sqrt_det_gradient, log_sqrt_det_gradient_routes, metric_at, LogDetGradient, MetricAtPoint,
};
pub use point::{ChartPoint, Domain};
pub use residual::{fit_order, Residual, ToleranceClass, RESIDUAL_FLOOR};
pub use sampling::{halton_points, radical_inverse, DEFAULT_MARGIN};
pub use tensor::{TensorComponents, Variance};
