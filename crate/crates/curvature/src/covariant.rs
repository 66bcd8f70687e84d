//! Covariant derivatives of tensors with any mix of upper and lower slots.
//!
//! Partials and results are laid out with the derivative index last:
//! entry `[idx * n + d]` holds `∂_d t[idx]` or `∇_d t[idx]`, where `idx`
//! is the row-major offset of the tensor slots.

use chart_core::{gradient_with_step, ChartError, ChartField, ChartPoint, Jet1, Variance};

/// `∇_d t` for coefficients `gamma[(k n + i) n + j] = Γ^k_{ij}`.
///
/// Each upper slot gains `+Γ^a_{h d} t[.. h ..]` and each lower slot
/// `−Γ^h_{a d} t[.. h ..]`.
pub fn covariant_derivative(
    gamma: &[f64],
    dim: usize,
    variance: &[Variance],
    t: &[f64],
    partials: &[f64],
) -> Vec<f64> {
    let n = dim;
    let rank = variance.len();
    let len = n.pow(rank as u32);
    debug_assert_eq!(t.len(), len);
    debug_assert_eq!(partials.len(), len * n);
    let g = |k: usize, i: usize, j: usize| gamma[(k * n + i) * n + j];
    // Stride of slot s in the flat offset.
    let strides: Vec<usize> = (0..rank).map(|s| n.pow((rank - 1 - s) as u32)).collect();
    let mut out = partials.to_vec();
    for idx in 0..len {
        for (s, var) in variance.iter().enumerate() {
            let stride = strides[s];
            let a = (idx / stride) % n;
            let base = idx - a * stride;
            for d in 0..n {
                let mut acc = 0.0;
                for h in 0..n {
                    let th = t[base + h * stride];
                    acc += match var {
                        Variance::Upper => g(a, h, d) * th,
                        Variance::Lower => -g(h, a, d) * th,
                    };
                }
                out[idx * n + d] += acc;
            }
        }
    }
    out
}

/// Values and exact partials of a jet-valued tensor.
pub fn jet_parts(t: &[Jet1], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let values = t.iter().map(|j| j.v).collect();
    let mut partials = Vec::with_capacity(t.len() * dim);
    for j in t {
        partials.extend_from_slice(&j.d[..dim]);
    }
    (values, partials)
}

/// Covariant derivative of a jet-valued tensor with exact partials.
pub fn covariant_derivative_jets(
    gamma: &[f64],
    dim: usize,
    variance: &[Variance],
    t: &[Jet1],
) -> Vec<f64> {
    let (values, partials) = jet_parts(t, dim);
    covariant_derivative(gamma, dim, variance, &values, &partials)
}

/// Central-difference partials of a field in derivative-last layout.
pub fn fd_partials(field: &ChartField, p: &ChartPoint, step: f64) -> Result<Vec<f64>, ChartError> {
    let n = p.dim();
    let grads = gradient_with_step(field, p, step)?;
    let len = grads.first().map_or(0, |g| g.data().len());
    let mut out = vec![0.0; len * n];
    for (d, g) in grads.iter().enumerate() {
        for (idx, v) in g.data().iter().enumerate() {
            out[idx * n + d] = *v;
        }
    }
    Ok(out)
}

/// Covariant derivative of a field whose partials come from central
/// differences at `p`, with the connection evaluated at `p`.
pub fn fd_covariant_derivative(
    field: &ChartField,
    gamma: &[f64],
    p: &ChartPoint,
    step: f64,
) -> Result<Vec<f64>, ChartError> {
    let value = field.eval(p)?;
    let partials = fd_partials(field, p, step)?;
    Ok(covariant_derivative(
        gamma,
        p.dim(),
        field.variance(),
        value.data(),
        &partials,
    ))
}
