use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use chart_core::{halton_points, ChartPoint, Domain, Jet2, SmoothField, Variance};
use connections::{statistical_pair_from_cubic, CubicMode, GeometryBundle};

use crate::error::ZooError;
use crate::quadrature::gauss_hermite;

/// Number of Gauss–Hermite nodes used for the Gaussian family.
pub const GAUSS_HERMITE_NODES: usize = 64;

pub fn metric_field<F>(domain: Domain, f: F) -> SmoothField
where
    F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
{
    SmoothField::new(
        domain.dim(),
        vec![Variance::Lower, Variance::Lower],
        domain,
        f,
    )
}

pub fn cubic_field<F>(domain: Domain, f: F) -> SmoothField
where
    F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
{
    SmoothField::new(domain.dim(), vec![Variance::Lower; 3], domain, f)
}

pub fn diagonal(entries: Vec<Jet2>) -> Vec<Jet2> {
    let n = entries.len();
    let mut out = vec![Jet2::ZERO; n * n];
    for (i, e) in entries.into_iter().enumerate() {
        out[i * n + i] = e;
    }
    out
}

/// Scores of `N(μ, σ²)` at the quadrature abscissae, written in the
/// standardized variable `z = (x − μ)/σ` so only `σ` enters as a jet:
/// `∂_μ l = z/σ`, `∂_σ l = (z² − 1)/σ`.
#[derive(Clone)]
struct GaussianScores {
    z: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussianScores {
    fn new(nodes: usize) -> Self {
        let (t, w) = gauss_hermite(nodes);
        let norm = PI.sqrt();
        GaussianScores {
            z: t.iter().map(|t| SQRT_2 * t).collect(),
            weights: w.iter().map(|w| w / norm).collect(),
        }
    }

    fn scores(&self, node: usize, sigma: Jet2) -> [Jet2; 2] {
        let z = self.z[node];
        let inv = sigma.recip();
        [inv.scale(z), inv.scale(z * z - 1.0)]
    }

    /// `E[∂_i l ∂_j l]`.
    fn fisher(&self, sigma: Jet2) -> Vec<Jet2> {
        let mut g = vec![Jet2::ZERO; 4];
        for (node, w) in self.weights.iter().enumerate() {
            let s = self.scores(node, sigma);
            for i in 0..2 {
                for j in 0..2 {
                    g[i * 2 + j] += (s[i] * s[j]).scale(*w);
                }
            }
        }
        g
    }

    /// `E[∂_i l ∂_j l ∂_k l]`.
    fn skewness(&self, sigma: Jet2) -> Vec<Jet2> {
        let mut c = vec![Jet2::ZERO; 8];
        for (node, w) in self.weights.iter().enumerate() {
            let s = self.scores(node, sigma);
            for i in 0..2 {
                for j in 0..2 {
                    let sij = s[i] * s[j];
                    for k in 0..2 {
                        c[(i * 2 + j) * 2 + k] += (sij * s[k]).scale(*w);
                    }
                }
            }
        }
        c
    }
}

/// Fisher metric of the Gaussian family in the chart `(μ, σ)`, evaluated by
/// quadrature with the given node count.
pub fn gaussian_fisher_metric(nodes: usize) -> SmoothField {
    let scores = Arc::new(GaussianScores::new(nodes));
    metric_field(gaussian_domain(), move |x| scores.fisher(x[1]))
}

/// Skewness tensor `E[∂_i l ∂_j l ∂_k l]` of the Gaussian family.
pub fn gaussian_skewness(nodes: usize) -> SmoothField {
    let scores = Arc::new(GaussianScores::new(nodes));
    cubic_field(gaussian_domain(), move |x| scores.skewness(x[1]))
}

pub fn gaussian_domain() -> Domain {
    Domain::new(vec![-1.0, 0.5], vec![1.0, 2.0]).expect("static box")
}

/// Normal family with Fisher metric and skewness tensor. `∇` is the
/// exponential connection and `∇*` the mixture connection.
pub fn gaussian_family() -> Result<GeometryBundle, ZooError> {
    let g = gaussian_fisher_metric(GAUSS_HERMITE_NODES);
    let c = gaussian_skewness(GAUSS_HERMITE_NODES);
    Ok(statistical_pair_from_cubic(
        &g,
        &c,
        CubicMode::TotallySymmetric,
        "gaussian_family",
    )?)
}

/// Round 2-sphere of radius `radius` in colatitude/longitude coordinates.
pub fn sphere(radius: f64) -> Result<GeometryBundle, ZooError> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(ZooError::NonpositiveParameter {
            name: "radius",
            value: radius,
        });
    }
    let domain = Domain::new(vec![0.1, -PI], vec![PI - 0.1, PI])?;
    let a2 = radius * radius;
    let g = metric_field(domain, move |x| {
        let s = x[0].sin();
        diagonal(vec![Jet2::constant(a2), (s * s).scale(a2)])
    });
    Ok(GeometryBundle::levi_civita(&format!("sphere({radius})"), g))
}

/// Flat space with the identity metric on `[−1, 1]^dim`.
pub fn euclidean(dim: usize) -> Result<GeometryBundle, ZooError> {
    let domain = Domain::cube(dim, -1.0, 1.0)?;
    let g = metric_field(domain, move |_| diagonal(vec![Jet2::constant(1.0); dim]));
    Ok(GeometryBundle::levi_civita(&format!("euclidean({dim})"), g))
}

pub type ScaleFn = Arc<dyn Fn(Jet2) -> Jet2 + Send + Sync>;

/// Lorentzian metric `diag(−1, a(t)², a(t)², a(t)²)` on
/// `t ∈ [0.5, 2]`, spatial coordinates in `[−1, 1]`.
pub fn diagonal_cosmo(scale_fn: ScaleFn, label: &str) -> Result<GeometryBundle, ZooError> {
    let domain = Domain::new(vec![0.5, -1.0, -1.0, -1.0], vec![2.0, 1.0, 1.0, 1.0])?;
    for p in halton_points(&domain, 50, 0, 0.0).into_iter().chain([
        ChartPoint::new(vec![0.5, 0.0, 0.0, 0.0])?,
        ChartPoint::new(vec![2.0, 0.0, 0.0, 0.0])?,
    ]) {
        let a = scale_fn(Jet2::constant(p.coords()[0])).v;
        if a.is_nan() || a <= 0.0 {
            return Err(ZooError::NonpositiveParameter {
                name: "scale factor",
                value: a,
            });
        }
    }
    let f = scale_fn.clone();
    let g = metric_field(domain, move |x| {
        let a = f(x[0]);
        let a2 = a * a;
        diagonal(vec![Jet2::constant(-1.0), a2, a2, a2])
    });
    Ok(GeometryBundle::levi_civita(
        &format!("diagonal_cosmo({label})"),
        g,
    ))
}

/// The cosmological fixture with `a(t) = t`.
pub fn diagonal_cosmo_linear() -> Result<GeometryBundle, ZooError> {
    diagonal_cosmo(Arc::new(|t| t), "a(t)=t")
}
