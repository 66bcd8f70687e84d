use std::io;

use thiserror::Error;

/// Failures of a CLI command, each mapped to an exit code.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("manifold specification: {0}")]
    Spec(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    /// Every error is a usage or specification problem from the caller's
    /// point of view; identity failures are reported, not raised.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<manifold_zoo::ZooError> for CliError {
    fn from(e: manifold_zoo::ZooError) -> Self {
        CliError::Spec(e.to_string())
    }
}

macro_rules! evaluation_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Evaluation(e.to_string())
            }
        })*
    };
}

evaluation_error!(
    chart_core::ChartError,
    connections::ConnectionError,
    curvature::CurvatureError,
    einstein::EinsteinError
);
