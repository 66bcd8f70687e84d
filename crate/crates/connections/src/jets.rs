//! Pointwise jet data: metric with inverse and first derivatives, and
//! connection coefficients with their first derivatives.

use chart_core::{
    ChartError, ChartPoint, Jet1, MetricAtPoint, SmoothField, TensorComponents, Variance,
};

/// Metric data at a point, each component carrying its gradient.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub dim: usize,
    /// `g_ij` at `[i * n + j]`.
    pub g: Vec<Jet1>,
    /// `g^ij` at `[i * n + j]`.
    pub g_inv: Vec<Jet1>,
    /// `∂_k g_ij` at `[(k * n + i) * n + j]`.
    pub dg: Vec<Jet1>,
    pub det: f64,
}

impl MetricJet {
    pub fn at(metric: &SmoothField, p: &ChartPoint) -> Result<Self, ChartError> {
        let n = p.dim();
        let jets = metric.jets(p)?;
        let values = TensorComponents::from_vec(
            n,
            vec![Variance::Lower, Variance::Lower],
            jets.iter().map(|j| j.v).collect(),
        )?;
        let m = MetricAtPoint::from_components(values)?;
        let g: Vec<Jet1> = jets.iter().map(|j| j.to_jet1()).collect();
        let mut dg = vec![Jet1::ZERO; n * n * n];
        for k in 0..n {
            for ij in 0..n * n {
                dg[k * n * n + ij] = jets[ij].partial(k);
            }
        }
        let gi = m.g_inv.data();
        let mut g_inv = vec![Jet1::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut jet = Jet1::constant(gi[i * n + j]);
                for a in 0..n {
                    let mut s = 0.0;
                    for p_ in 0..n {
                        for q in 0..n {
                            s += gi[i * n + p_] * jets[p_ * n + q].d[a] * gi[q * n + j];
                        }
                    }
                    jet.d[a] = -s;
                }
                g_inv[i * n + j] = jet;
            }
        }
        Ok(MetricJet {
            dim: n,
            g,
            g_inv,
            dg,
            det: m.det_g,
        })
    }

    pub fn g(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.dim + j].v
    }

    pub fn g_inv(&self, i: usize, j: usize) -> f64 {
        self.g_inv[i * self.dim + j].v
    }

    pub fn g_values(&self) -> Vec<f64> {
        self.g.iter().map(|j| j.v).collect()
    }

    pub fn g_inv_values(&self) -> Vec<f64> {
        self.g_inv.iter().map(|j| j.v).collect()
    }

    pub fn metric_components(&self) -> TensorComponents {
        TensorComponents::from_vec(
            self.dim,
            vec![Variance::Lower, Variance::Lower],
            self.g_values(),
        )
        .expect("square")
    }
}

/// Connection coefficients `Γ^k_{ij}` at a point, stored at
/// `[(k * n + i) * n + j]`, with `∇_{∂_j} ∂_i = Γ^k_{ij} ∂_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnJet {
    pub dim: usize,
    pub data: Vec<Jet1>,
}

impl ConnJet {
    pub fn zeros(dim: usize) -> Self {
        ConnJet {
            dim,
            data: vec![Jet1::ZERO; dim * dim * dim],
        }
    }

    #[inline]
    pub fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.dim + i) * self.dim + j
    }

    #[inline]
    pub fn at(&self, k: usize, i: usize, j: usize) -> Jet1 {
        self.data[self.idx(k, i, j)]
    }

    #[inline]
    pub fn value(&self, k: usize, i: usize, j: usize) -> f64 {
        self.data[self.idx(k, i, j)].v
    }

    /// `∂_axis Γ^k_{ij}`.
    #[inline]
    pub fn deriv(&self, k: usize, i: usize, j: usize, axis: usize) -> f64 {
        self.data[self.idx(k, i, j)].d[axis]
    }

    pub fn values(&self) -> Vec<f64> {
        self.data.iter().map(|j| j.v).collect()
    }

    pub fn components(&self) -> TensorComponents {
        TensorComponents::from_vec(
            self.dim,
            vec![Variance::Upper, Variance::Lower, Variance::Lower],
            self.values(),
        )
        .expect("cube")
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &ConnJet, b: f64) -> ConnJet {
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| x.scale(a) + y.scale(b))
            .collect();
        ConnJet {
            dim: self.dim,
            data,
        }
    }

    /// Symmetric part in the two lower slots.
    pub fn symmetrized(&self) -> ConnJet {
        let mut out = self.clone();
        let n = self.dim;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    out.data[self.idx(k, i, j)] = (self.at(k, i, j) + self.at(k, j, i)).scale(0.5);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, j| m.max(j.v.abs()))
    }
}

/// Levi-Civita coefficients of the metric jet.
pub fn levi_civita_jet(m: &MetricJet) -> ConnJet {
    let n = m.dim;
    let dg = |k: usize, i: usize, j: usize| m.dg[(k * n + i) * n + j];
    let mut out = ConnJet::zeros(n);
    for mm in 0..n {
        for j in 0..n {
            for k in j..n {
                let mut acc = Jet1::ZERO;
                for i in 0..n {
                    let lowered = (dg(k, i, j) + dg(j, i, k) - dg(i, j, k)).scale(0.5);
                    acc += m.g_inv[mm * n + i] * lowered;
                }
                let a = out.idx(mm, j, k);
                let b = out.idx(mm, k, j);
                out.data[a] = acc;
                out.data[b] = acc;
            }
        }
    }
    out
}

/// Nonmetricity `C_kij = ∂_k g_ij − g_mi Γ^m_{jk} − g_mj Γ^m_{ik}` as jets,
/// stored at `[(k * n + i) * n + j]`.
pub fn nonmetricity_jet(m: &MetricJet, conn: &ConnJet) -> Vec<Jet1> {
    let n = m.dim;
    let mut out = vec![Jet1::ZERO; n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = m.dg[(k * n + i) * n + j];
                for mm in 0..n {
                    acc -=
                        m.g[mm * n + i] * conn.at(mm, j, k) + m.g[mm * n + j] * conn.at(mm, i, k);
                }
                out[(k * n + i) * n + j] = acc;
                out[(k * n + j) * n + i] = acc;
            }
        }
    }
    out
}

/// Dual coefficients `Γ*^m_{ik} = Γ^m_{ik} + g^{mj} C_kij`.
pub fn dual_jet(m: &MetricJet, conn: &ConnJet) -> ConnJet {
    let n = m.dim;
    let c = nonmetricity_jet(m, conn);
    let mut out = conn.clone();
    for mm in 0..n {
        for i in 0..n {
            for k in 0..n {
                let mut acc = conn.at(mm, i, k);
                for j in 0..n {
                    acc += m.g_inv[mm * n + j] * c[(k * n + i) * n + j];
                }
                let o = out.idx(mm, i, k);
                out.data[o] = acc;
            }
        }
    }
    out
}

/// Torsion `T^i_{kl} = Γ^i_{lk} − Γ^i_{kl}` as jets, stored at `[(i * n + k) * n + l]`.
pub fn torsion_jet(conn: &ConnJet) -> Vec<Jet1> {
    let n = conn.dim;
    let mut out = vec![Jet1::ZERO; n * n * n];
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                out[(i * n + k) * n + l] = conn.at(i, l, k) - conn.at(i, k, l);
            }
        }
    }
    out
}

pub fn values(jets: &[Jet1]) -> Vec<f64> {
    jets.iter().map(|j| j.v).collect()
}
