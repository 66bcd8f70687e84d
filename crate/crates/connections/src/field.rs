use std::sync::Arc;

use chart_core::{
    ChartError, ChartField, ChartPoint, Domain, Jet1, SmoothField, TensorComponents, Variance,
};

use crate::error::ConnectionError;
use crate::jets::{dual_jet, levi_civita_jet, ConnJet, MetricJet};

type ConnFn = dyn Fn(&ChartPoint) -> Result<ConnJet, ChartError> + Send + Sync;

/// Affine connection given by its coefficients and their first derivatives
/// at every chart point. No symmetry in the lower slots is assumed.
#[derive(Clone)]
pub struct ConnectionField {
    dim: usize,
    domain: Domain,
    eval: Arc<ConnFn>,
}

impl std::fmt::Debug for ConnectionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConnectionField")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish()
    }
}

impl ConnectionField {
    pub fn new<F>(dim: usize, domain: Domain, eval: F) -> Self
    where
        F: Fn(&ChartPoint) -> Result<ConnJet, ChartError> + Send + Sync + 'static,
    {
        ConnectionField {
            dim,
            domain,
            eval: Arc::new(eval),
        }
    }

    /// Coefficients written directly as a rank-3 jet field in `Γ[k][i][j]` layout.
    pub fn from_smooth(field: SmoothField) -> Self {
        let dim = field.dim();
        let domain = field.domain().clone();
        ConnectionField::new(dim, domain, move |p| {
            let data: Vec<Jet1> = field.jets(p)?.into_iter().map(|j| j.to_jet1()).collect();
            Ok(ConnJet { dim, data })
        })
    }

    /// The connection with all coefficients zero.
    pub fn flat(dim: usize, domain: Domain) -> Self {
        ConnectionField::new(dim, domain, move |_| Ok(ConnJet::zeros(dim)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn jet(&self, p: &ChartPoint) -> Result<ConnJet, ChartError> {
        if p.dim() != self.dim {
            return Err(ChartError::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        let out = (self.eval)(p)?;
        if out.data.iter().any(|j| !j.v.is_finite()) {
            return Err(ChartError::NonFiniteComponent {
                point: p.coords().to_vec(),
            });
        }
        Ok(out)
    }

    /// Coefficient values with variance (upper, lower, lower).
    pub fn components(&self, p: &ChartPoint) -> Result<TensorComponents, ChartError> {
        Ok(self.jet(p)?.components())
    }

    /// The coefficients as a plain chart field, for finite differencing.
    pub fn as_chart_field(&self) -> ChartField {
        let this = self.clone();
        ChartField::new(
            self.dim,
            vec![Variance::Upper, Variance::Lower, Variance::Lower],
            self.domain.clone(),
            move |p| this.components(p),
        )
    }

    /// Pointwise map of the coefficient jets.
    pub fn map<F>(&self, f: F) -> ConnectionField
    where
        F: Fn(&ChartPoint, ConnJet) -> Result<ConnJet, ChartError> + Send + Sync + 'static,
    {
        let this = self.clone();
        ConnectionField::new(self.dim, self.domain.clone(), move |p| f(p, this.jet(p)?))
    }
}

/// Levi-Civita connection of a metric.
pub fn levi_civita(metric: &SmoothField) -> ConnectionField {
    let g = metric.clone();
    ConnectionField::new(metric.dim(), metric.domain().clone(), move |p| {
        Ok(levi_civita_jet(&MetricJet::at(&g, p)?))
    })
}

/// The g-dual of a connection.
pub fn dual_connection(metric: &SmoothField, conn: &ConnectionField) -> ConnectionField {
    let g = metric.clone();
    let c = conn.clone();
    ConnectionField::new(conn.dim(), conn.domain().clone(), move |p| {
        Ok(dual_jet(&MetricJet::at(&g, p)?, &c.jet(p)?))
    })
}

/// The combination `a ∇ + b ∇̄` of coefficients. It is a connection only when
/// `a + b = 1`; other weights are still useful for trace identities.
pub fn affine_combination(
    a: f64,
    conn: &ConnectionField,
    b: f64,
    other: &ConnectionField,
) -> Result<ConnectionField, ConnectionError> {
    if conn.dim() != other.dim() {
        return Err(ConnectionError::DimensionMismatch(conn.dim(), other.dim()));
    }
    let (x, y) = (conn.clone(), other.clone());
    Ok(ConnectionField::new(
        conn.dim(),
        conn.domain().clone(),
        move |p| Ok(x.jet(p)?.combine(a, &y.jet(p)?, b)),
    ))
}

/// `½(∇ + ∇*)`.
pub fn average_connection(
    conn: &ConnectionField,
    conn_star: &ConnectionField,
) -> Result<ConnectionField, ConnectionError> {
    affine_combination(0.5, conn, 0.5, conn_star)
}

/// `(1+α)/2 ∇ + (1−α)/2 ∇*`. The endpoints return the inputs unchanged.
pub fn alpha_connection(
    conn: &ConnectionField,
    conn_star: &ConnectionField,
    alpha: f64,
) -> Result<ConnectionField, ConnectionError> {
    if conn.dim() != conn_star.dim() {
        return Err(ConnectionError::DimensionMismatch(
            conn.dim(),
            conn_star.dim(),
        ));
    }
    if alpha == 1.0 {
        return Ok(conn.clone());
    }
    if alpha == -1.0 {
        return Ok(conn_star.clone());
    }
    affine_combination(0.5 * (1.0 + alpha), conn, 0.5 * (1.0 - alpha), conn_star)
}

/// The weights `((1+α)/2, (1−α)/2)`.
pub fn alpha_weights(alpha: f64) -> (f64, f64) {
    (0.5 * (1.0 + alpha), 0.5 * (1.0 - alpha))
}
