use nalgebra::DMatrix;

use crate::error::ChartError;
use crate::field::{partial_derivative, ChartField};
use crate::jet::invert_with_det;
use crate::point::ChartPoint;
use crate::tensor::{TensorComponents, Variance};

/// Relative symmetry threshold for metric components.
pub const METRIC_SYMMETRY_TOL: f64 = 1e-12;
/// Relative determinant threshold below which a metric counts as singular.
pub const METRIC_SINGULAR_TOL: f64 = 1e-14;

/// Pointwise linear algebra of a metric.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricAtPoint {
    pub g: TensorComponents,
    pub g_inv: TensorComponents,
    pub det_g: f64,
    pub sqrt_abs_det: f64,
    /// Sign of each eigenvalue, sorted with negative entries first.
    pub signature: Vec<i8>,
}

impl MetricAtPoint {
    /// Builds the pointwise data from symmetric-by-contract components.
    pub fn from_components(g: TensorComponents) -> Result<Self, ChartError> {
        if g.variance() != [Variance::Lower, Variance::Lower] {
            return Err(ChartError::VarianceMismatch(
                "metric must be a rank-2 lower tensor".into(),
            ));
        }
        let n = g.dim();
        let scale = g.max_abs();
        let mut sym = g.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (g.get(&[i, j]), g.get(&[j, i]));
                let gap = (a - b).abs();
                if gap > METRIC_SYMMETRY_TOL * scale {
                    return Err(ChartError::AsymmetricMetric { i, j, gap });
                }
                sym.set(&[j, i], a);
            }
        }
        let threshold = METRIC_SINGULAR_TOL * scale.powi(n as i32);
        let (inv, det) = invert_with_det(sym.data(), n).ok_or(ChartError::SingularMetric {
            det: 0.0,
            threshold,
        })?;
        if det.is_nan() || det.abs() < threshold || det == 0.0 {
            return Err(ChartError::SingularMetric { det, threshold });
        }
        let g_inv = TensorComponents::from_vec(n, vec![Variance::Upper, Variance::Upper], inv)?;
        let eig = DMatrix::from_row_slice(n, n, sym.data()).symmetric_eigenvalues();
        let mut signature: Vec<i8> = eig.iter().map(|e| if *e < 0.0 { -1 } else { 1 }).collect();
        signature.sort();
        Ok(MetricAtPoint {
            g: sym,
            g_inv,
            det_g: det,
            sqrt_abs_det: det.abs().sqrt(),
            signature,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Lowers the single upper slot of a vector.
    pub fn lower(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.g.get(&[i, j]) * v[j]).sum())
            .collect()
    }

    /// Raises the single lower slot of a covector.
    pub fn raise(&self, w: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| (0..n).map(|j| self.g_inv.get(&[i, j]) * w[j]).sum())
            .collect()
    }
}

/// Evaluates the metric field and its inverse, determinant and signature.
pub fn metric_at(g_field: &ChartField, p: &ChartPoint) -> Result<MetricAtPoint, ChartError> {
    MetricAtPoint::from_components(g_field.eval(p)?)
}

/// Both evaluations of `∂_i log √|g|`.
#[derive(Clone, Debug, PartialEq)]
pub struct LogDetGradient {
    /// `½ g^{pq} ∂_i g_pq` with finite-difference metric derivatives.
    pub contraction: TensorComponents,
    /// Central difference of the scalar `log √|g|`.
    pub direct: TensorComponents,
}

/// `∂_i log √|g|` by central differences of the scalar `log √|g|`.
///
/// This route carries the smaller truncation constant on typical metrics;
/// [`log_sqrt_det_gradient_routes`] also returns the contraction route.
pub fn log_sqrt_det_gradient(
    g_field: &ChartField,
    p: &ChartPoint,
) -> Result<TensorComponents, ChartError> {
    Ok(log_sqrt_det_gradient_routes(g_field, p)?.direct)
}

pub fn log_sqrt_det_gradient_routes(
    g_field: &ChartField,
    p: &ChartPoint,
) -> Result<LogDetGradient, ChartError> {
    let n = p.dim();
    let here = metric_at(g_field, p)?;
    let mut contraction = TensorComponents::zeros(n, vec![Variance::Lower]);
    for i in 0..n {
        let dg = partial_derivative(g_field, p, i)?;
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                acc += here.g_inv.get(&[a, b]) * dg.get(&[a, b]);
            }
        }
        contraction.set(&[i], 0.5 * acc);
    }
    let metric = g_field.clone();
    let log_volume = ChartField::new(n, Vec::new(), g_field.domain().clone(), move |q| {
        let m = metric_at(&metric, q)?;
        Ok(TensorComponents::scalar(m.sqrt_abs_det.ln()))
    })
    .with_step(g_field.fd_step())?;
    let mut direct = TensorComponents::zeros(n, vec![Variance::Lower]);
    for i in 0..n {
        direct.set(&[i], partial_derivative(&log_volume, p, i)?.data()[0]);
    }
    Ok(LogDetGradient {
        contraction,
        direct,
    })
}
