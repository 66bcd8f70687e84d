//! Affine connections on a chart and the constructions built from a metric:
//! Levi-Civita, dual, average and α-connections, torsion, nonmetricity,
//! the difference tensor, traces, structural classification of dual pairs
//! and equiaffine diagnostics.
//!
//! Coefficients are stored as `Γ[k][i][j] = Γ^k_{ij}` with
//! `∇_{∂_j} ∂_i = Γ^k_{ij} ∂_k`, so the derivative direction is the last slot.

pub mod bundle;
pub mod equiaffine;
pub mod error;
pub mod field;
pub mod jets;
pub mod ops;
pub mod structure;

pub use bundle::{
    cubic_term_scale, duality_residual, recovered_pair, statistical_pair_from_cubic,
    total_symmetry_residual, BundleKind, CubicMode, GeometryBundle, PointJets,
};
pub use equiaffine::{
    alpha_density, dual_density, equiaffine_residual, metric_density, product_density,
    EquiaffineResidual,
};
pub use error::ConnectionError;
pub use field::{
    affine_combination, alpha_connection, alpha_weights, average_connection, dual_connection,
    levi_civita, ConnectionField,
};
pub use jets::{
    dual_jet, levi_civita_jet, nonmetricity_jet, torsion_jet, values, ConnJet, MetricJet,
};
pub use ops::{
    alpha_torsion, difference_tensor, nonmetricity, torsion, torsion_of, trace_left, trace_right,
};
pub use structure::{holds, structure_residuals, StructureResiduals};
