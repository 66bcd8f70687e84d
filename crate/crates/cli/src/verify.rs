use std::time::Instant;

use chart_core::{halton_points, ChartPoint, Residual, ToleranceClass, DEFAULT_MARGIN};
use connections::GeometryBundle;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::{sig9, sig9_opt, to_columns, to_csv};
use crate::registry::{suite_for, Identity, PointContext};

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub points: usize,
    /// Offset into the Halton sequence.
    pub seed: u64,
    pub step: f64,
    /// Worker threads; `None` uses the rayon default.
    pub threads: Option<usize>,
    pub timing: bool,
    /// Restrict the suite to one tolerance class.
    pub class: Option<ToleranceClass>,
}

impl VerifyOptions {
    pub fn new(points: usize, seed: u64, step: f64) -> Self {
        VerifyOptions {
            points,
            seed,
            step,
            threads: None,
            timing: false,
            class: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityOutcome {
    pub name: String,
    pub statement: String,
    pub class: String,
    pub tolerance: f64,
    /// Points at which the identity's hypothesis held and it was evaluated.
    pub points: usize,
    pub max_relative: Option<f64>,
    pub max_abs: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub manifold: String,
    pub kind: String,
    pub dim: usize,
    pub points: usize,
    pub seed: u64,
    pub h: f64,
    pub identities: Vec<IdentityOutcome>,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
    pub first_failure: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl VerifyReport {
    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            1
        }
    }

    pub fn outcome(&self, name: &str) -> Option<&IdentityOutcome> {
        self.identities.iter().find(|o| o.name == name)
    }

    pub fn to_csv(&self) -> String {
        let header = [
            "name",
            "class",
            "points",
            "max_relative",
            "max_abs",
            "tolerance",
            "pass",
        ]
        .map(String::from);
        to_csv(&header, &self.rows())
    }

    pub fn to_text(&self) -> String {
        let header = [
            "identity",
            "class",
            "points",
            "max_relative",
            "max_abs",
            "tolerance",
            "status",
        ]
        .map(String::from);
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|mut r| {
                r[6] = if r[6] == "true" { "PASS" } else { "FAIL" }.to_string();
                r
            })
            .collect();
        let mut out = format!(
            "manifold {} ({}, dim {}), {} points, seed {}, h {}\n",
            self.manifold,
            self.kind,
            self.dim,
            self.points,
            self.seed,
            sig9(self.h)
        );
        out.push_str(&to_columns(&header, &rows));
        out.push_str(&format!("{} passed, {} failed", self.passed, self.failed));
        if let Some(first) = &self.first_failure {
            out.push_str(&format!("; first failure: {first}"));
        }
        if let Some(t) = self.wall_time_s {
            out.push_str(&format!("; wall time {t:.3} s"));
        }
        out.push('\n');
        out
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.identities
            .iter()
            .map(|o| {
                vec![
                    o.name.clone(),
                    o.class.clone(),
                    o.points.to_string(),
                    sig9_opt(o.max_relative),
                    sig9_opt(o.max_abs),
                    sig9(o.tolerance),
                    o.pass.to_string(),
                ]
            })
            .collect()
    }
}

type PointResults = Vec<Option<Residual>>;

fn evaluate_point(
    bundle: &GeometryBundle,
    suite: &[&Identity],
    p: &ChartPoint,
    step: f64,
) -> Result<PointResults, CliError> {
    let ctx = PointContext::new(bundle, p.clone(), step)?;
    suite.iter().map(|id| id.evaluate(&ctx)).collect()
}

/// Evaluates `suite` at every point, in parallel, returning results in
/// point order.
pub fn evaluate_points(
    bundle: &GeometryBundle,
    suite: &[&Identity],
    points: &[ChartPoint],
    step: f64,
    threads: Option<usize>,
) -> Result<Vec<PointResults>, CliError> {
    let run = || -> Result<Vec<PointResults>, CliError> {
        points
            .par_iter()
            .map(|p| evaluate_point(bundle, suite, p, step))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("--threads {n}: {e}")))?
            .install(run),
        None => run(),
    }
}

/// Largest relative and absolute residual of one identity over the points
/// where it applies. NaN anywhere makes the maximum NaN.
pub fn reduce(
    results: impl IntoIterator<Item = Option<Residual>>,
) -> (usize, Option<f64>, Option<f64>) {
    let mut count = 0;
    let mut rel: Option<f64> = None;
    let mut abs: Option<f64> = None;
    let worst = |acc: Option<f64>, x: f64| {
        Some(match acc {
            Some(a) if a.is_nan() || x.is_nan() => f64::NAN,
            Some(a) => a.max(x),
            None => x,
        })
    };
    for r in results.into_iter().flatten() {
        count += 1;
        rel = worst(rel, r.relative());
        abs = worst(abs, r.abs);
    }
    (count, rel, abs)
}

pub fn verify_bundle(
    bundle: &GeometryBundle,
    opts: &VerifyOptions,
) -> Result<VerifyReport, CliError> {
    if opts.points == 0 {
        return Err(CliError::Usage("--points must be at least 1".into()));
    }
    if !(opts.step.is_finite() && opts.step > 0.0) {
        return Err(CliError::Usage(format!(
            "--h must be positive, got {}",
            opts.step
        )));
    }
    let started = Instant::now();
    let suite: Vec<&Identity> = suite_for(bundle.kind)
        .into_iter()
        .filter(|id| opts.class.is_none_or(|c| c == id.class))
        .collect();
    let points = halton_points(&bundle.domain, opts.points, opts.seed, DEFAULT_MARGIN);
    let results = evaluate_points(bundle, &suite, &points, opts.step, opts.threads)?;

    let identities: Vec<IdentityOutcome> = suite
        .iter()
        .enumerate()
        .map(|(k, id)| {
            let (count, max_relative, max_abs) = reduce(results.iter().map(|row| row[k]));
            let tolerance = id.class.tolerance();
            IdentityOutcome {
                name: id.name.to_string(),
                statement: id.statement.to_string(),
                class: id.class.label().to_string(),
                tolerance,
                points: count,
                max_relative,
                max_abs,
                pass: max_relative.is_none_or(|r| r <= tolerance),
            }
        })
        .collect();
    let passed = identities.iter().filter(|o| o.pass).count();
    let failed = identities.len() - passed;
    Ok(VerifyReport {
        manifold: bundle.name.clone(),
        kind: bundle.kind.label().to_string(),
        dim: bundle.dim(),
        points: opts.points,
        seed: opts.seed,
        h: opts.step,
        first_failure: identities.iter().find(|o| !o.pass).map(|o| o.name.clone()),
        all_pass: failed == 0,
        passed,
        failed,
        identities,
        wall_time_s: opts.timing.then(|| started.elapsed().as_secs_f64()),
    })
}
