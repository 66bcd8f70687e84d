use std::fmt;

use chart_core::{ChartPoint, Residual, TensorComponents, Variance};
use connections::GeometryBundle;
use curvature::{
    alpha_ricci_direct, blend_coefficients, quadratic_ricci, ricci, riemann_of, PointCurvature,
    RicciValue,
};

use crate::error::EinsteinError;
use crate::h_tensor::h_tensor_of;

/// Which connection an Einstein tensor is built from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EinsteinSource {
    Nabla,
    NablaStar,
    Alpha(f64),
}

impl fmt::Display for EinsteinSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EinsteinSource::Nabla => f.write_str("nabla"),
            EinsteinSource::NablaStar => f.write_str("nabla_star"),
            EinsteinSource::Alpha(a) => write!(f, "alpha({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EinsteinValue {
    pub dim: usize,
    /// `G_ij` at `[i n + j]`, symmetric bit for bit.
    pub tensor: Vec<f64>,
    pub source: EinsteinSource,
}

impl EinsteinValue {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tensor[i * self.dim + j]
    }

    pub fn components(&self) -> TensorComponents {
        TensorComponents::from_vec(
            self.dim,
            vec![Variance::Lower, Variance::Lower],
            self.tensor.clone(),
        )
        .expect("rank 2")
    }
}

/// `G_ij = R_(ij) − ½ g_ij R`, filled on the upper triangle and mirrored.
pub fn einstein_from_ricci(ric: &RicciValue, g: &[f64]) -> Vec<f64> {
    symmetric_minus_half_trace(&ric.symmetric, g, ric.scalar, ric.dim)
}

/// `S_ij − ½ g_ij s` for a symmetric `S`, mirrored from the upper triangle.
pub(crate) fn symmetric_minus_half_trace(s: &[f64], g: &[f64], trace: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let v = s[i * n + j] - 0.5 * g[i * n + j] * trace;
            out[i * n + j] = v;
            out[j * n + i] = v;
        }
    }
    out
}

/// Einstein tensor at a point whose curvature data is already available.
/// The α case uses the curvature of the α-connection itself.
pub fn einstein_of(pc: &PointCurvature, source: EinsteinSource) -> EinsteinValue {
    let ric = match source {
        EinsteinSource::Nabla => pc.ric.clone(),
        EinsteinSource::NablaStar => pc.ric_star.clone(),
        EinsteinSource::Alpha(alpha) => alpha_ricci_direct(pc, alpha),
    };
    EinsteinValue {
        dim: pc.dim,
        tensor: einstein_from_ricci(&ric, &pc.g),
        source,
    }
}

pub fn einstein_tensor(
    bundle: &GeometryBundle,
    source: EinsteinSource,
    p: &ChartPoint,
) -> Result<EinsteinValue, EinsteinError> {
    let jets = bundle.jets(p)?;
    let conn = match source {
        EinsteinSource::Nabla => jets.nabla.clone(),
        EinsteinSource::NablaStar => jets.star.clone(),
        EinsteinSource::Alpha(alpha) => jets.alpha(alpha),
    };
    let g = jets.metric.g_values();
    let ric = ricci(&riemann_of(&conn), &jets.metric.g_inv_values());
    Ok(EinsteinValue {
        dim: jets.dim(),
        tensor: einstein_from_ricci(&ric, &g),
        source,
    })
}

/// α-Einstein tensor from the α-connection's own Ricci tensor.
pub fn alpha_einstein(
    bundle: &GeometryBundle,
    alpha: f64,
    p: &ChartPoint,
) -> Result<EinsteinValue, EinsteinError> {
    einstein_tensor(bundle, EinsteinSource::Alpha(alpha), p)
}

/// `aG + bG* + cH` with the α blend coefficients.
pub fn alpha_einstein_blend(pc: &PointCurvature, alpha: f64) -> Vec<f64> {
    let (a, b, c) = blend_coefficients(alpha);
    let g = einstein_from_ricci(&pc.ric, &pc.g);
    let gs = einstein_from_ricci(&pc.ric_star, &pc.g);
    let h = h_tensor_of(pc);
    (0..g.len())
        .map(|x| a * g[x] + b * gs[x] + c * h[x])
        .collect()
}

/// Agreement of the blend with the direct α-Einstein tensor.
pub fn alpha_einstein_residual(pc: &PointCurvature, alpha: f64) -> Residual {
    let direct = einstein_of(pc, EinsteinSource::Alpha(alpha));
    let blend = alpha_einstein_blend(pc, alpha);
    let mut r = Residual::of_difference(&direct.tensor, &blend);
    r.terms(&pc.ric.tensor);
    r.terms(&pc.ric_star.tensor);
    r.terms(&quadratic_ricci(pc));
    r
}

/// `g^{ij} G_ij − (1 − n/2) R`.
pub fn einstein_trace_residual(g: &EinsteinValue, ric: &RicciValue, g_inv: &[f64]) -> Residual {
    let trace: f64 = g.tensor.iter().zip(g_inv).map(|(a, b)| a * b).sum();
    let expected = (1.0 - 0.5 * g.dim as f64) * ric.scalar;
    let mut r = Residual::of_sum(&[(1.0, &[trace]), (-1.0, &[expected])]);
    r.term(ric.scalar);
    r
}
