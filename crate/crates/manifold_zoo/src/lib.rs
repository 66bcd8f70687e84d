//! Example geometries: the Gaussian family with Fisher metric and skewness
//! tensor from Gauss–Hermite quadrature, round spheres, flat spaces, a
//! Lorentzian scale-factor metric, seeded random bundles of every kind and
//! JSON manifold specifications.

pub mod builtin;
pub mod error;
pub mod polynomial;
pub mod quadrature;
pub mod random;
pub mod spec;

pub use builtin::{
    diagonal_cosmo, diagonal_cosmo_linear, euclidean, gaussian_domain, gaussian_family,
    gaussian_fisher_metric, gaussian_skewness, sphere, GAUSS_HERMITE_NODES,
};
pub use error::ZooError;
pub use polynomial::Polynomial;
pub use quadrature::{gauss_hermite, standard_normal_expectation};
pub use random::{
    equiaffine_case, flat_constant_cubic, flat_traceless_statistical, random_bundle,
    random_bundle_with_params, random_params, structural_family, traceless_cubic,
    traceless_statistical, verbatim_last_two_pair, RandomParams,
};
pub use spec::{builtin_by_name, load_spec, BUILTIN_NAMES};
