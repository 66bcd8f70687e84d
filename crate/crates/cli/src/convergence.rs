use chart_core::{fit_order, halton_points, ToleranceClass, DEFAULT_MARGIN};
use connections::GeometryBundle;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::{sig9, sig9_opt, to_columns};
use crate::registry::{find, names, Identity};
use crate::verify::{evaluate_points, reduce};

/// Bounds on the fitted slope of a second-order identity.
pub const ORDER_RANGE: (f64, f64) = (1.8, 2.2);

pub const DEFAULT_SWEEP: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRow {
    pub h: f64,
    pub points: usize,
    pub max_abs: Option<f64>,
    pub max_relative: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub manifold: String,
    pub identity: String,
    pub class: String,
    pub steps: Vec<StepRow>,
    pub fitted_order: Option<f64>,
    /// `second_order`, `rounding_plateau` or `irregular`.
    pub order_class: String,
    pub expected: String,
    pub meets_expectation: bool,
}

impl ConvergenceReport {
    pub fn exit_code(&self) -> i32 {
        if self.meets_expectation {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let header = ["h", "points", "max_abs", "max_relative"].map(String::from);
        let rows: Vec<Vec<String>> = self
            .steps
            .iter()
            .map(|s| {
                vec![
                    sig9(s.h),
                    s.points.to_string(),
                    sig9_opt(s.max_abs),
                    sig9_opt(s.max_relative),
                ]
            })
            .collect();
        let mut out = format!("{} on {} ({})\n", self.identity, self.manifold, self.class);
        out.push_str(&to_columns(&header, &rows));
        out.push_str(&format!(
            "fitted order {}, class {}, expected {}: {}\n",
            sig9_opt(self.fitted_order),
            self.order_class,
            self.expected,
            if self.meets_expectation {
                "OK"
            } else {
                "MISMATCH"
            }
        ));
        out
    }
}

pub fn resolve_identity(name: &str) -> Result<&'static Identity, CliError> {
    find(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown identity '{name}'; valid names: {}",
            names().join(", ")
        ))
    })
}

fn check_sweep(steps: &[f64]) -> Result<(), CliError> {
    let positive = steps.iter().all(|h| h.is_finite() && *h > 0.0);
    let decreasing = steps.windows(2).all(|w| w[1] < w[0]);
    if steps.len() < 2 || !positive || !decreasing {
        return Err(CliError::Usage(format!(
            "--h-sweep needs at least two positive, strictly decreasing steps, got {steps:?}"
        )));
    }
    Ok(())
}

/// Residual of `identity` at each step. The fitted order is the log-log
/// slope of the largest absolute residual. A run whose relative residual
/// stays within the algebraic tolerance at every step is a rounding
/// plateau: there is no truncation error to fit.
pub fn convergence(
    bundle: &GeometryBundle,
    identity_name: &str,
    steps: &[f64],
    points: usize,
    seed: u64,
) -> Result<ConvergenceReport, CliError> {
    let identity = resolve_identity(identity_name)?;
    check_sweep(steps)?;
    if !identity.scope.admits(bundle.kind) {
        return Err(CliError::Usage(format!(
            "identity '{}' does not apply to {} bundles",
            identity.name, bundle.kind
        )));
    }
    if points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    let sample = halton_points(&bundle.domain, points, seed, DEFAULT_MARGIN);
    let mut rows = Vec::with_capacity(steps.len());
    for &h in steps {
        let results = evaluate_points(bundle, &[identity], &sample, h, Some(1))?;
        let (count, max_relative, max_abs) = reduce(results.into_iter().map(|r| r[0]));
        rows.push(StepRow {
            h,
            points: count,
            max_abs,
            max_relative,
        });
    }
    if rows.iter().any(|r| r.points == 0) {
        return Err(CliError::Usage(format!(
            "the hypothesis of '{}' does not hold at the sampled points",
            identity.name
        )));
    }
    let algebraic = ToleranceClass::Algebraic.tolerance();
    let plateau = rows
        .iter()
        .all(|r| r.max_relative.is_some_and(|x| x <= algebraic));
    let abs: Vec<f64> = rows.iter().map(|r| r.max_abs.unwrap_or(f64::NAN)).collect();
    let fitted_order = fit_order(steps, &abs);
    let second_order = fitted_order.is_some_and(|p| (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&p));
    let order_class = if plateau {
        "rounding_plateau"
    } else if second_order {
        "second_order"
    } else {
        "irregular"
    };
    let (expected, meets) = match identity.class {
        ToleranceClass::Algebraic => ("rounding_plateau", plateau),
        // A differential identity that holds to rounding at every step in
        // this geometry has no truncation error; that is not a failure.
        ToleranceClass::Differential => ("second_order", second_order || plateau),
    };
    Ok(ConvergenceReport {
        manifold: bundle.name.clone(),
        identity: identity.name.to_string(),
        class: identity.class.label().to_string(),
        steps: rows,
        fitted_order,
        order_class: order_class.to_string(),
        expected: expected.to_string(),
        meets_expectation: meets,
    })
}
