use chart_core::ChartError;
use connections::ConnectionError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CurvatureError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}
