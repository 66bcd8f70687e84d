//! Parallel volume forms `ω = λ dx¹ ∧ … ∧ dxⁿ`.

use chart_core::{
    gradient_with_step, invert_with_det, metric_at, ChartError, ChartField, ChartPoint, Jet2,
    Residual, SmoothField, TensorComponents,
};

use crate::error::ConnectionError;
use crate::field::ConnectionField;
use crate::jets::{nonmetricity_jet, values, MetricJet};

/// Residuals of the two equivalent forms of the equiaffine condition.
#[derive(Clone, Copy, Debug, Default)]
pub struct EquiaffineResidual {
    /// `∂_i log λ − Γ^k_{ki}`.
    pub trace_form: Residual,
    /// `Tr₂(K)_i − 2 ∂_i log(√|g| / λ)`, with `K` the difference to the dual.
    pub difference_form: Residual,
}

impl EquiaffineResidual {
    pub fn max_relative(&self) -> f64 {
        self.trace_form
            .relative()
            .max(self.difference_form.relative())
    }
}

fn log_field(lambda: &SmoothField, metric: Option<&SmoothField>) -> ChartField {
    let (lam, g) = (lambda.clone(), metric.cloned());
    ChartField::new(
        lambda.dim(),
        Vec::new(),
        lambda.domain().clone(),
        move |p| {
            let v = lam.values(p)?.data()[0];
            if v.is_nan() || v <= 0.0 {
                return Err(ChartError::NonpositiveVolume {
                    value: v,
                    point: p.coords().to_vec(),
                });
            }
            let base = match &g {
                Some(g) => metric_at(&g.to_chart_field(), p)?.sqrt_abs_det.ln(),
                None => 0.0,
            };
            Ok(TensorComponents::scalar(base - v.ln()))
        },
    )
}

/// Evaluates whether `conn` parallelizes `λ dx¹ ∧ … ∧ dxⁿ` at `p`, using
/// central differences with base step `step` for the logarithmic gradients.
pub fn equiaffine_residual(
    conn: &ConnectionField,
    metric: &SmoothField,
    lambda: &SmoothField,
    p: &ChartPoint,
    step: f64,
) -> Result<EquiaffineResidual, ConnectionError> {
    let n = p.dim();
    let lam = lambda.values(p)?.data()[0];
    if lam.is_nan() || lam <= 0.0 {
        return Err(ChartError::NonpositiveVolume {
            value: lam,
            point: p.coords().to_vec(),
        }
        .into());
    }
    // log λ is recovered as −(0 − log λ).
    let dlog_lambda: Vec<f64> = gradient_with_step(&log_field(lambda, None), p, step)?
        .iter()
        .map(|t| -t.data()[0])
        .collect();
    let dlog_ratio: Vec<f64> = gradient_with_step(&log_field(lambda, Some(metric)), p, step)?
        .iter()
        .map(|t| t.data()[0])
        .collect();
    let gamma = conn.jet(p)?;
    let m = MetricJet::at(metric, p)?;
    let c = values(&nonmetricity_jet(&m, &gamma));
    let dg = m.dg.iter().fold(0.0f64, |a, x| a.max(x.v.abs()));
    let g_max = m.g_values().iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let cubic_scale = dg.max(g_max * gamma.max_abs());
    let mut trace_form = Residual::new();
    let mut difference_form = Residual::new();
    for i in 0..n {
        let tr: Vec<f64> = (0..n).map(|k| gamma.value(k, k, i)).collect();
        let mut terms = vec![(1.0, vec![dlog_lambda[i]])];
        terms.extend(tr.iter().map(|x| (-1.0, vec![*x])));
        trace_form.add_sum(
            &terms
                .iter()
                .map(|(c, v)| (*c, v.as_slice()))
                .collect::<Vec<_>>(),
        );
        // Tr₂(K)_i = g^{pq} C_ipq.
        let mut parts = Vec::new();
        for a in 0..n {
            for b in 0..n {
                parts.push(m.g_inv(a, b) * c[(i * n + a) * n + b]);
            }
        }
        let mut terms: Vec<(f64, Vec<f64>)> = parts.into_iter().map(|x| (1.0, vec![x])).collect();
        terms.push((-2.0, vec![dlog_ratio[i]]));
        difference_form.add_sum(
            &terms
                .iter()
                .map(|(c, v)| (*c, v.as_slice()))
                .collect::<Vec<_>>(),
        );
        // Both sides cancel between ∂ log √|g| and ∂ log λ, and C cancels
        // between ∂g and gΓ, so those magnitudes set the scale.
        difference_form.term(2.0 * dlog_lambda[i]);
        difference_form.term(2.0 * (dlog_ratio[i] + dlog_lambda[i]));
        difference_form.term(cubic_scale);
    }
    Ok(EquiaffineResidual {
        trace_form,
        difference_form,
    })
}

fn abs_det(metric: &SmoothField, x: &[Jet2]) -> Jet2 {
    let n = metric.dim();
    match invert_with_det(&metric.eval_jets(x), n) {
        Some((_, d)) if d.v < 0.0 => d.scale(-1.0),
        Some((_, d)) => d,
        None => Jet2::constant(f64::NAN),
    }
}

fn density<F>(metric: &SmoothField, f: F) -> SmoothField
where
    F: Fn(&[Jet2], Jet2) -> Jet2 + Send + Sync + 'static,
{
    let g = metric.clone();
    SmoothField::new(
        metric.dim(),
        Vec::new(),
        metric.domain().clone(),
        move |x| vec![f(x, abs_det(&g, x))],
    )
}

/// The Riemannian density `√|g|`.
pub fn metric_density(metric: &SmoothField) -> SmoothField {
    density(metric, |_, d| d.sqrt())
}

/// `|g| / λ`, the volume density paralleled by the dual of a connection
/// that parallelizes `λ`.
pub fn dual_density(metric: &SmoothField, lambda: &SmoothField) -> SmoothField {
    let lam = lambda.clone();
    density(metric, move |x, d| d / lam.eval_jets(x)[0])
}

/// `λ^α |g|^{(1−α)/2}` for the α-connection.
pub fn alpha_density(metric: &SmoothField, lambda: &SmoothField, alpha: f64) -> SmoothField {
    let lam = lambda.clone();
    density(metric, move |x, d| {
        lam.eval_jets(x)[0].powf(alpha) * d.powf(0.5 * (1.0 - alpha))
    })
}

/// `λ^a μ^b` for the combination `a∇ + b∇̄`.
pub fn product_density(lambda: &SmoothField, a: f64, mu: &SmoothField, b: f64) -> SmoothField {
    let (l, m) = (lambda.clone(), mu.clone());
    SmoothField::new(
        lambda.dim(),
        Vec::new(),
        lambda.domain().clone(),
        move |x| vec![l.eval_jets(x)[0].powf(a) * m.eval_jets(x)[0].powf(b)],
    )
}
