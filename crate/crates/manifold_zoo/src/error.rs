use chart_core::ChartError;
use connections::ConnectionError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ZooError {
    #[error("parameter '{name}' must be positive, got {value}")]
    NonpositiveParameter { name: &'static str, value: f64 },
    #[error("could not generate a valid {kind} bundle after {attempts} attempts: {last}")]
    GenerationFailure {
        kind: String,
        attempts: usize,
        last: String,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    ParseError {
        message: String,
        line: usize,
        column: usize,
    },
    #[error("validation failed for '{invariant}': {detail}")]
    ValidationError { invariant: String, detail: String },
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Chart(#[from] ChartError),
}

impl ZooError {
    pub(crate) fn validation(invariant: &str, detail: impl Into<String>) -> Self {
        ZooError::ValidationError {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }
}
