use chart_core::{ChartPoint, Residual};
use connections::GeometryBundle;
use curvature::{quadratic_ricci_of, symmetrize, trace_with, PointCurvature};

use crate::error::EinsteinError;
use crate::tensor::symmetric_minus_half_trace;

/// `H_ij = 𝒦_(ij) − ½ g_ij 𝒦` from raw `K` values.
pub fn h_tensor_from(k: &[f64], g: &[f64], g_inv: &[f64], n: usize) -> Vec<f64> {
    let kq = quadratic_ricci_of(k, n);
    let sym = symmetrize(&kq, n);
    symmetric_minus_half_trace(&sym, g, trace_with(g_inv, &kq), n)
}

pub fn h_tensor_of(pc: &PointCurvature) -> Vec<f64> {
    h_tensor_from(&pc.k, &pc.g, &pc.g_inv, pc.dim)
}

pub fn h_tensor(bundle: &GeometryBundle, p: &ChartPoint) -> Result<Vec<f64>, EinsteinError> {
    Ok(h_tensor_of(&PointCurvature::at(bundle, p)?))
}

/// `H` written out term by term, with `K` read in the transposed
/// convention `κ^a_{bc} = K^a_{cb}`:
/// `½[κ^m_{li} κ^l_{jm} + κ^m_{lj} κ^l_{im} − κ^l_{lm}(κ^m_{ij} + κ^m_{ji})] − ½ g_ij 𝒦`,
/// with `𝒦 = g^{ij}(κ^m_{li} κ^l_{jm} − κ^l_{lm} κ^m_{ji})`.
pub fn h_tensor_expanded(pc: &PointCurvature) -> Vec<f64> {
    let n = pc.dim;
    let kp = |a: usize, b: usize, c: usize| pc.k(a, c, b);
    let mut scalar = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for m in 0..n {
                for l in 0..n {
                    s += kp(m, l, i) * kp(l, j, m) - kp(l, l, m) * kp(m, j, i);
                }
            }
            scalar += pc.g_inv[i * n + j] * s;
        }
    }
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for m in 0..n {
                for l in 0..n {
                    s += kp(m, l, i) * kp(l, j, m) + kp(m, l, j) * kp(l, i, m)
                        - kp(l, l, m) * (kp(m, i, j) + kp(m, j, i));
                }
            }
            out[i * n + j] = 0.5 * s - 0.5 * pc.g[i * n + j] * scalar;
        }
    }
    out
}

/// Agreement of the two routes to `H`.
pub fn h_routes_residual(pc: &PointCurvature) -> Residual {
    let a = h_tensor_of(pc);
    let b = h_tensor_expanded(pc);
    let mut r = Residual::of_difference(&a, &b);
    let k_scale = pc.k.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    r.term(k_scale * k_scale);
    r
}
