//! Residual bookkeeping and tolerance classes.
//!
//! A residual is the largest absolute defect of an identity over all its
//! components, divided by the largest magnitude among the terms entering it
//! (floored at [`RESIDUAL_FLOOR`]).

use std::fmt;

/// Absolute floor applied to the reference magnitude.
pub const RESIDUAL_FLOOR: f64 = 1e-12;

/// How an identity is expected to behave numerically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ToleranceClass {
    /// Holds pointwise up to rounding.
    Algebraic,
    /// Involves an explicit central difference; decays as `O(h²)`.
    Differential,
}

impl ToleranceClass {
    pub fn tolerance(self) -> f64 {
        match self {
            ToleranceClass::Algebraic => 1e-9,
            ToleranceClass::Differential => 5e-5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ToleranceClass::Algebraic => "algebraic",
            ToleranceClass::Differential => "differential",
        }
    }
}

impl fmt::Display for ToleranceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Running maximum of an identity's defect and of its term magnitudes.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn new() -> Self {
        Residual::default()
    }

    /// Residual of `Σ_t coeff_t · term_t = 0`, evaluated componentwise.
    /// All term slices must have the same length.
    pub fn of_sum(terms: &[(f64, &[f64])]) -> Self {
        let mut r = Residual::new();
        r.add_sum(terms);
        r
    }

    pub fn add_sum(&mut self, terms: &[(f64, &[f64])]) {
        let len = terms.first().map_or(0, |t| t.1.len());
        for k in 0..len {
            let mut total = 0.0;
            for (c, t) in terms {
                let x = c * t[k];
                total += x;
                self.scale = self.scale.max(x.abs());
            }
            self.abs = self.abs.max(total.abs());
        }
    }

    /// Residual of `lhs - rhs = 0` componentwise.
    pub fn of_difference(lhs: &[f64], rhs: &[f64]) -> Self {
        Residual::of_sum(&[(1.0, lhs), (-1.0, rhs)])
    }

    /// Records a defect value directly.
    pub fn defect(&mut self, value: f64) {
        self.abs = self.abs.max(value.abs());
    }

    /// Records a term magnitude without a defect.
    pub fn term(&mut self, magnitude: f64) {
        self.scale = self.scale.max(magnitude.abs());
    }

    pub fn terms(&mut self, values: &[f64]) {
        for v in values {
            self.term(*v);
        }
    }

    pub fn merge(&mut self, other: Residual) {
        self.abs = self.abs.max(other.abs);
        self.scale = self.scale.max(other.scale);
    }

    pub fn merged(mut self, other: Residual) -> Residual {
        self.merge(other);
        self
    }

    pub fn relative(&self) -> f64 {
        if self.abs.is_nan() || self.scale.is_nan() {
            return f64::NAN;
        }
        self.abs / self.scale.max(RESIDUAL_FLOOR)
    }

    pub fn passes(&self, class: ToleranceClass) -> bool {
        self.relative() <= class.tolerance()
    }
}

/// Least-squares slope of `ln r` against `ln h`.
///
/// Returns `None` for fewer than two samples or non-positive entries.
pub fn fit_order(steps: &[f64], residuals: &[f64]) -> Option<f64> {
    if steps.len() != residuals.len() || steps.len() < 2 {
        return None;
    }
    if steps
        .iter()
        .chain(residuals)
        .any(|x| !(x.is_finite() && *x > 0.0))
    {
        return None;
    }
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals.iter().map(|r| r.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
