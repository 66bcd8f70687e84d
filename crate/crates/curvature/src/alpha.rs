use chart_core::Residual;
use connections::alpha_weights;

use crate::decomposition::quadratic_term;
use crate::point::PointCurvature;
use crate::riemann::{ricci, riemann_of, RicciValue, RiemannValue};

/// `(a, b, c)` with `a = (1+α)/2`, `b = (1−α)/2`, `c = (1−α²)/4`.
pub fn blend_coefficients(alpha: f64) -> (f64, f64, f64) {
    let (a, b) = alpha_weights(alpha);
    (a, b, a * b)
}

/// Curvature of the α-connection computed from its own coefficients.
pub fn alpha_riemann_direct(pc: &PointCurvature, alpha: f64) -> RiemannValue {
    riemann_of(&pc.jets.alpha(alpha))
}

/// `aR + bR* − c Q`, where `Q` is the quadratic part of the curvature of
/// `Γ + K` (so `−Q` is the `K(Y, K(X, Z)) − K(X, K(Y, Z))` bracket).
pub fn alpha_riemann_blend(pc: &PointCurvature, alpha: f64) -> RiemannValue {
    let (a, b, c) = blend_coefficients(alpha);
    let q = quadratic_term(&pc.k, pc.dim);
    let data =
        pc.r.data()
            .iter()
            .zip(pc.r_star.data())
            .zip(&q)
            .map(|((r, rs), q)| a * r + b * rs - c * q)
            .collect();
    RiemannValue::from_data(pc.dim, data)
}

pub fn alpha_riemann_residual(pc: &PointCurvature, alpha: f64) -> Residual {
    let direct = alpha_riemann_direct(pc, alpha);
    let blend = alpha_riemann_blend(pc, alpha);
    let mut r = Residual::of_difference(direct.data(), blend.data());
    r.terms(pc.r.data());
    r.terms(pc.r_star.data());
    r
}

/// `𝒦_lj = K^m_{li} K^i_{mj} − K^m_{lj} K^i_{mi}` in the internal `K`
/// layout, at `[l n + j]`.
pub fn quadratic_ricci_of(k: &[f64], n: usize) -> Vec<f64> {
    let kk = |a: usize, b: usize, c: usize| k[(a * n + b) * n + c];
    let mut out = vec![0.0; n * n];
    for l in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for m in 0..n {
                for i in 0..n {
                    s += kk(m, l, i) * kk(i, m, j) - kk(m, l, j) * kk(i, m, i);
                }
            }
            out[l * n + j] = s;
        }
    }
    out
}

pub fn quadratic_ricci(pc: &PointCurvature) -> Vec<f64> {
    quadratic_ricci_of(&pc.k, pc.dim)
}

/// `𝒦 = g^{lj} 𝒦_lj`.
pub fn quadratic_scalar(pc: &PointCurvature) -> f64 {
    quadratic_ricci(pc)
        .iter()
        .zip(&pc.g_inv)
        .map(|(a, b)| a * b)
        .sum()
}

/// α-Ricci by contracting the α-curvature of the α-connection.
pub fn alpha_ricci_direct(pc: &PointCurvature, alpha: f64) -> RicciValue {
    ricci(&alpha_riemann_direct(pc, alpha), &pc.g_inv)
}

/// α-Ricci as `aR_lj + bR*_lj + c𝒦_lj`.
pub fn alpha_ricci_blend(pc: &PointCurvature, alpha: f64) -> RicciValue {
    let (a, b, c) = blend_coefficients(alpha);
    let n = pc.dim;
    let kq = quadratic_ricci(pc);
    let tensor: Vec<f64> = (0..n * n)
        .map(|x| a * pc.ric.tensor[x] + b * pc.ric_star.tensor[x] + c * kq[x])
        .collect();
    let symmetric = crate::riemann::symmetrize(&tensor, n);
    let scalar = crate::riemann::trace_with(&pc.g_inv, &tensor);
    RicciValue {
        dim: n,
        tensor,
        symmetric,
        scalar,
    }
}

pub fn alpha_ricci_residual(pc: &PointCurvature, alpha: f64) -> Residual {
    let direct = alpha_ricci_direct(pc, alpha);
    let blend = alpha_ricci_blend(pc, alpha);
    let mut r = Residual::of_difference(&direct.tensor, &blend.tensor);
    r.add_sum(&[(1.0, &[direct.scalar]), (-1.0, &[blend.scalar])]);
    r.terms(&pc.ric.tensor);
    r.terms(&pc.ric_star.tensor);
    r
}
