//! Command-line front end: identity verification reports, tensor
//! components at points and over grids, and finite-difference convergence
//! studies. The binary is a thin wrapper around [`run`].

pub mod app;
pub mod compute;
pub mod convergence;
pub mod error;
pub mod output;
pub mod registry;
pub mod source;
pub mod verify;

pub use app::run;
pub use compute::{compute, table, Axis, ComputeOutput, TensorName};
pub use convergence::{convergence, ConvergenceReport, DEFAULT_SWEEP, ORDER_RANGE};
pub use error::CliError;
pub use output::to_json;
pub use registry::{find, names, suite_for, Identity, PointContext, Scope, REGISTRY};
pub use source::load_manifold;
pub use verify::{verify_bundle, IdentityOutcome, VerifyOptions, VerifyReport};
