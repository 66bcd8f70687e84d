//! Curvature of affine connections on a chart and residual evaluators for
//! the identities relating a dual pair, its average connection and the
//! α-family.
//!
//! Internal layout: `R[m][k][j][i] = R_m^k_{ji}` with
//! `R(∂_j, ∂_i) ∂_m = R_m^k_{ji} ∂_k`, and the Ricci tensor is
//! `R_mi = R_m^j_{ji}`. Connection coefficients follow the `connections`
//! crate: `Γ[k][i][j] = Γ^k_{ij}` with the derivative direction last.

pub mod alpha;
pub mod covariant;
pub mod decomposition;
pub mod differential;
pub mod error;
pub mod point;
pub mod riemann;

pub use alpha::{
    alpha_ricci_blend, alpha_ricci_direct, alpha_ricci_residual, alpha_riemann_blend,
    alpha_riemann_direct, alpha_riemann_residual, blend_coefficients, quadratic_ricci,
    quadratic_ricci_of, quadratic_scalar,
};
pub use covariant::{
    covariant_derivative, covariant_derivative_jets, fd_covariant_derivative, fd_partials,
    jet_parts,
};
pub use decomposition::{
    contract, decomposition_residuals, derivative_term, duality_curvature_residual,
    first_pair_residual, last_pair_residual, quadratic_term, ricci_decomposition_residuals,
    specialized_residuals, statistical_residuals, torsion_term, universal_residuals, NamedResidual,
};
pub use differential::{
    alpha_ricci_antisymmetry, bianchi_residuals, curvature_term_scale, ricci_antisymmetry_residual,
    riemann_field, torsion_field, AlphaRicciAntisymmetry, BianchiResiduals, RicciAntisymmetry,
};
pub use error::CurvatureError;
pub use point::PointCurvature;
pub use riemann::{
    ricci, ricci_tensor, riemann, riemann_christoffel, riemann_of, symmetrize, trace_with,
    RicciValue, RiemannValue,
};
