use chart_core::{ChartError, ChartPoint, SmoothField, TensorComponents, Variance};

use crate::bundle::GeometryBundle;
use crate::error::ConnectionError;
use crate::field::{alpha_weights, ConnectionField};
use crate::jets::{nonmetricity_jet, torsion_jet, values, ConnJet, MetricJet};

fn rank3(dim: usize, variance: [Variance; 3], data: Vec<f64>) -> TensorComponents {
    TensorComponents::from_vec(dim, variance.to_vec(), data).expect("cube")
}

const MIXED: [Variance; 3] = [Variance::Upper, Variance::Lower, Variance::Lower];

/// `C_kij = (∇_{∂_k} g)(∂_i, ∂_j)`, all slots lower.
pub fn nonmetricity(
    metric: &SmoothField,
    conn: &ConnectionField,
    p: &ChartPoint,
) -> Result<TensorComponents, ChartError> {
    let m = MetricJet::at(metric, p)?;
    let c = nonmetricity_jet(&m, &conn.jet(p)?);
    Ok(rank3(p.dim(), [Variance::Lower; 3], values(&c)))
}

/// `T^i_{kl} = Γ^i_{lk} − Γ^i_{kl}`, the components of `T(∂_k, ∂_l)`.
pub fn torsion(conn: &ConnectionField, p: &ChartPoint) -> Result<TensorComponents, ChartError> {
    Ok(torsion_of(&conn.jet(p)?))
}

pub fn torsion_of(conn: &ConnJet) -> TensorComponents {
    rank3(conn.dim, MIXED, values(&torsion_jet(conn)))
}

/// `K = Γ* − Γ` in coefficient layout: `K[k][i][j]` is component `k` of
/// `K(∂_j, ∂_i)`.
pub fn difference_tensor(
    conn: &ConnectionField,
    conn_star: &ConnectionField,
    p: &ChartPoint,
) -> Result<TensorComponents, ConnectionError> {
    if conn.dim() != conn_star.dim() {
        return Err(ConnectionError::DimensionMismatch(
            conn.dim(),
            conn_star.dim(),
        ));
    }
    let a = conn.jet(p)?;
    let b = conn_star.jet(p)?;
    Ok(b.combine(1.0, &a, -1.0).components())
}

/// Torsion of the α-connection from the blend of the two torsions.
pub fn alpha_torsion(
    bundle: &GeometryBundle,
    alpha: f64,
    p: &ChartPoint,
) -> Result<TensorComponents, ConnectionError> {
    let t = torsion(&bundle.nabla, p)?;
    let ts = torsion(&bundle.nabla_star, p)?;
    if alpha == 1.0 {
        return Ok(t);
    }
    if alpha == -1.0 {
        return Ok(ts);
    }
    let (a, b) = alpha_weights(alpha);
    Ok(t.combine(a, &ts, b)?)
}

fn check_mixed(t: &TensorComponents) -> Result<(), ChartError> {
    if t.variance() != MIXED {
        return Err(ChartError::VarianceMismatch(format!(
            "trace needs variance (upper, lower, lower), got {:?}",
            t.variance()
        )));
    }
    Ok(())
}

/// `Tr₁(K)_i = K^k_{ik}`: the upper slot contracted with the last slot.
pub fn trace_right(t: &TensorComponents) -> Result<TensorComponents, ChartError> {
    check_mixed(t)?;
    let n = t.dim();
    let data = (0..n)
        .map(|i| (0..n).map(|k| t.get(&[k, i, k])).sum())
        .collect();
    TensorComponents::from_vec(n, vec![Variance::Lower], data)
}

/// `Tr₂(K)_i = K^k_{ki}`: the upper slot contracted with the middle slot.
pub fn trace_left(t: &TensorComponents) -> Result<TensorComponents, ChartError> {
    check_mixed(t)?;
    let n = t.dim();
    let data = (0..n)
        .map(|i| (0..n).map(|k| t.get(&[k, k, i])).sum())
        .collect();
    TensorComponents::from_vec(n, vec![Variance::Lower], data)
}
