use std::sync::{Arc, OnceLock};

use crate::error::ChartError;
use crate::jet::Jet2;
use crate::point::{ChartPoint, Domain};
use crate::tensor::{TensorComponents, Variance};

/// Base step used when a field does not carry its own.
pub const DEFAULT_BASE_STEP: f64 = 1e-4;

/// Environment variable that replaces [`DEFAULT_BASE_STEP`].
pub const STEP_ENV_VAR: &str = "IGCURV_DEFAULT_H";

/// The process-wide default base step, read once from the environment.
pub fn default_base_step() -> f64 {
    static STEP: OnceLock<f64> = OnceLock::new();
    *STEP.get_or_init(|| {
        std::env::var(STEP_ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|h| h.is_finite() && *h > 0.0)
            .unwrap_or(DEFAULT_BASE_STEP)
    })
}

/// Actual step along one axis: the base step scaled by `max(1, |x|)`.
pub fn axis_step(base: f64, coordinate: f64) -> f64 {
    base * coordinate.abs().max(1.0)
}

type ValueFn = dyn Fn(&ChartPoint) -> Result<TensorComponents, ChartError> + Send + Sync;
type JetFn = dyn Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync;

/// A tensor field given by a pure point evaluator.
#[derive(Clone)]
pub struct ChartField {
    dim: usize,
    variance: Vec<Variance>,
    domain: Domain,
    fd_step: f64,
    eval: Arc<ValueFn>,
}

impl std::fmt::Debug for ChartField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ChartField")
            .field("dim", &self.dim)
            .field("variance", &self.variance)
            .field("domain", &self.domain)
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl ChartField {
    pub fn new<F>(dim: usize, variance: Vec<Variance>, domain: Domain, eval: F) -> Self
    where
        F: Fn(&ChartPoint) -> Result<TensorComponents, ChartError> + Send + Sync + 'static,
    {
        ChartField {
            dim,
            variance,
            domain,
            fd_step: default_base_step(),
            eval: Arc::new(eval),
        }
    }

    /// Replaces the base finite-difference step.
    pub fn with_step(mut self, step: f64) -> Result<Self, ChartError> {
        if !(step.is_finite() && step > 0.0) {
            return Err(ChartError::InvalidStep(step));
        }
        self.fd_step = step;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn eval(&self, p: &ChartPoint) -> Result<TensorComponents, ChartError> {
        if p.dim() != self.dim {
            return Err(ChartError::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        let value = (self.eval)(p)?;
        if !value.is_finite() {
            return Err(ChartError::NonFiniteComponent {
                point: p.coords().to_vec(),
            });
        }
        Ok(value)
    }
}

/// Central difference of `field` along `axis` using the field's own step.
pub fn partial_derivative(
    field: &ChartField,
    p: &ChartPoint,
    axis: usize,
) -> Result<TensorComponents, ChartError> {
    partial_derivative_with_step(field, p, axis, field.fd_step())
}

/// Central difference `(F(p + h e) - F(p - h e)) / 2h` with
/// `h = base * max(1, |x_axis|)`.
pub fn partial_derivative_with_step(
    field: &ChartField,
    p: &ChartPoint,
    axis: usize,
    base: f64,
) -> Result<TensorComponents, ChartError> {
    if !(base.is_finite() && base > 0.0) {
        return Err(ChartError::InvalidStep(base));
    }
    if axis >= p.dim() {
        return Err(ChartError::DimensionMismatch {
            expected: p.dim(),
            found: axis + 1,
        });
    }
    let h = axis_step(base, p.coords()[axis]);
    let plus = p.shifted(axis, h);
    let minus = p.shifted(axis, -h);
    for stencil in [&plus, &minus] {
        if !field.domain().contains(stencil.coords()) {
            return Err(ChartError::DomainEscape {
                stencil: stencil.coords().to_vec(),
                axis,
                step: h,
            });
        }
    }
    // Divide by the distance between the stencil points as actually
    // represented, not by the nominal 2h.
    let width = plus.coords()[axis] - minus.coords()[axis];
    let fp = field.eval(&plus)?;
    let fm = field.eval(&minus)?;
    fp.combine(1.0 / width, &fm, -1.0 / width)
}

/// All coordinate partials of a field, one entry per axis.
pub fn gradient_with_step(
    field: &ChartField,
    p: &ChartPoint,
    base: f64,
) -> Result<Vec<TensorComponents>, ChartError> {
    (0..p.dim())
        .map(|a| partial_derivative_with_step(field, p, a, base))
        .collect()
}

/// A field written over second-order jets, so that its first and second
/// coordinate derivatives come out exactly.
#[derive(Clone)]
pub struct SmoothField {
    dim: usize,
    variance: Vec<Variance>,
    domain: Domain,
    eval: Arc<JetFn>,
}

impl std::fmt::Debug for SmoothField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothField")
            .field("dim", &self.dim)
            .field("variance", &self.variance)
            .finish()
    }
}

impl SmoothField {
    pub fn new<F>(dim: usize, variance: Vec<Variance>, domain: Domain, eval: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        SmoothField {
            dim,
            variance,
            domain,
            eval: Arc::new(eval),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Evaluates the raw jet closure on arbitrary jet coordinates.
    pub fn eval_jets(&self, coords: &[Jet2]) -> Vec<Jet2> {
        (self.eval)(coords)
    }

    /// Components as jets at a point, seeded so that slot `a` of every
    /// gradient is the derivative along coordinate `a`.
    pub fn jets(&self, p: &ChartPoint) -> Result<Vec<Jet2>, ChartError> {
        if p.dim() != self.dim {
            return Err(ChartError::DimensionMismatch {
                expected: self.dim,
                found: p.dim(),
            });
        }
        let out = (self.eval)(&Jet2::seed(p.coords()));
        let expected = self.dim.pow(self.rank() as u32);
        if out.len() != expected {
            return Err(ChartError::DimensionMismatch {
                expected,
                found: out.len(),
            });
        }
        if out
            .iter()
            .any(|j| !j.v.is_finite() || j.d.iter().any(|x| !x.is_finite()))
        {
            return Err(ChartError::NonFiniteComponent {
                point: p.coords().to_vec(),
            });
        }
        Ok(out)
    }

    pub fn values(&self, p: &ChartPoint) -> Result<TensorComponents, ChartError> {
        let jets = self.jets(p)?;
        TensorComponents::from_vec(
            self.dim,
            self.variance.clone(),
            jets.iter().map(|j| j.v).collect(),
        )
    }

    /// View of the values as a plain [`ChartField`].
    pub fn to_chart_field(&self) -> ChartField {
        let this = self.clone();
        ChartField::new(
            self.dim,
            self.variance.clone(),
            self.domain.clone(),
            move |p| this.values(p),
        )
    }
}
