//! Einstein tensors of a dual pair and of its α-connections, the quadratic
//! `H` tensor, divergence formulas and the effective stress-energy split.
//!
//! Every Einstein tensor is built from the symmetrized Ricci tensor,
//! `G_ij = R_(ij) − ½ g_ij R`, and is symmetric bit for bit.

pub mod divergence;
pub mod error;
pub mod h_tensor;
pub mod stress;
pub mod tensor;

pub use divergence::{
    alpha_einstein_divergence, alpha_einstein_field, einstein_divergence_quasi,
    einstein_divergence_statistical, einstein_field, fd_divergence, h_field, AlphaDivergence,
    DivergenceEntry, DivergenceReport, Side,
};
pub use error::EinsteinError;
pub use h_tensor::{h_routes_residual, h_tensor, h_tensor_expanded, h_tensor_from, h_tensor_of};
pub use stress::{effective_stress_energy, stress_energy_split, StressEnergySplit};
pub use tensor::{
    alpha_einstein, alpha_einstein_blend, alpha_einstein_residual, einstein_from_ricci,
    einstein_of, einstein_tensor, einstein_trace_residual, EinsteinSource, EinsteinValue,
};
