use chart_core::ChartError;
use connections::{BundleKind, ConnectionError};
use curvature::CurvatureError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EinsteinError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error("bundle '{bundle}' is {found}, but this operation needs {expected}")]
    KindMismatch {
        bundle: String,
        expected: &'static str,
        found: BundleKind,
    },
    #[error("α = −1 makes the effective stress-energy split singular")]
    AlphaSingular,
    #[error("matter tensor must be a rank-2 covariant field of dimension {expected}")]
    MatterShape { expected: usize },
}
