use chart_core::{ChartError, ChartPoint, TensorComponents, Variance};
use connections::{ConnJet, ConnectionField};

use crate::error::CurvatureError;

/// Curvature components `R_m^k_{ji}` stored at `[((m n + k) n + j) n + i]`,
/// with `R(∂_j, ∂_i) ∂_m = R_m^k_{ji} ∂_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannValue {
    dim: usize,
    data: Vec<f64>,
}

impl RiemannValue {
    pub fn zeros(dim: usize) -> Self {
        RiemannValue {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn idx(&self, m: usize, k: usize, j: usize, i: usize) -> usize {
        ((m * self.dim + k) * self.dim + j) * self.dim + i
    }

    #[inline]
    pub fn get(&self, m: usize, k: usize, j: usize, i: usize) -> f64 {
        self.data[self.idx(m, k, j, i)]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    pub fn components(&self) -> TensorComponents {
        TensorComponents::from_vec(
            self.dim,
            vec![
                Variance::Lower,
                Variance::Upper,
                Variance::Lower,
                Variance::Lower,
            ],
            self.data.clone(),
        )
        .expect("rank 4")
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &RiemannValue, b: f64) -> RiemannValue {
        RiemannValue {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub(crate) fn from_data(dim: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), dim.pow(4));
        RiemannValue { dim, data }
    }
}

/// Curvature of connection coefficients with exact first derivatives:
/// `R_i^j_{kl} = ∂_k Γ^j_{il} − ∂_l Γ^j_{ik} + Γ^h_{il} Γ^j_{hk} − Γ^h_{ik} Γ^j_{hl}`.
///
/// Only `k < l` is evaluated; the mirrored entry is its exact negative.
pub fn riemann_of(conn: &ConnJet) -> RiemannValue {
    let n = conn.dim;
    let mut out = RiemannValue::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in (k + 1)..n {
                    let mut v = conn.deriv(j, i, l, k) - conn.deriv(j, i, k, l);
                    for h in 0..n {
                        v += conn.value(h, i, l) * conn.value(j, h, k)
                            - conn.value(h, i, k) * conn.value(j, h, l);
                    }
                    let a = out.idx(i, j, k, l);
                    let b = out.idx(i, j, l, k);
                    out.data[a] = v;
                    out.data[b] = -v;
                }
            }
        }
    }
    out
}

pub fn riemann(conn: &ConnectionField, p: &ChartPoint) -> Result<RiemannValue, CurvatureError> {
    if !conn.domain().contains(p.coords()) {
        return Err(ChartError::OutsideDomain {
            point: p.coords().to_vec(),
        }
        .into());
    }
    Ok(riemann_of(&conn.jet(p)?))
}

/// Lowered curvature `R(X, Y, Z, V) = g(R(Z, V) Y, X)` stored at
/// `[((x n + y) n + z) n + v]`.
pub fn riemann_christoffel(g: &[f64], r: &RiemannValue) -> Vec<f64> {
    let n = r.dim();
    let mut out = vec![0.0; n.pow(4)];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for v in 0..n {
                    out[((x * n + y) * n + z) * n + v] =
                        (0..n).map(|b| g[x * n + b] * r.get(y, b, z, v)).sum();
                }
            }
        }
    }
    out
}

/// Ricci data at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct RicciValue {
    pub dim: usize,
    /// `R_mi = R_m^j_{ji}` at `[m n + i]`.
    pub tensor: Vec<f64>,
    /// `R_(mi)`, symmetric bit for bit.
    pub symmetric: Vec<f64>,
    /// `g^{mi} R_mi`.
    pub scalar: f64,
}

impl RicciValue {
    pub fn get(&self, m: usize, i: usize) -> f64 {
        self.tensor[m * self.dim + i]
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

pub fn ricci_tensor(r: &RiemannValue) -> Vec<f64> {
    let n = r.dim();
    let mut out = vec![0.0; n * n];
    for m in 0..n {
        for i in 0..n {
            out[m * n + i] = (0..n).map(|j| r.get(m, j, j, i)).sum();
        }
    }
    out
}

pub fn symmetrize(t: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let s = 0.5 * (t[i * n + j] + t[j * n + i]);
            out[i * n + j] = s;
            out[j * n + i] = s;
        }
    }
    out
}

pub fn trace_with(g_inv: &[f64], t: &[f64]) -> f64 {
    g_inv.iter().zip(t).map(|(a, b)| a * b).sum()
}

/// Ricci tensor, its symmetric part and the scalar `g^{mi} R_mi`.
pub fn ricci(r: &RiemannValue, g_inv: &[f64]) -> RicciValue {
    let n = r.dim();
    let tensor = ricci_tensor(r);
    let symmetric = symmetrize(&tensor, n);
    let scalar = trace_with(g_inv, &tensor);
    RicciValue {
        dim: n,
        tensor,
        symmetric,
        scalar,
    }
}
