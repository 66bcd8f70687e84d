//! Acceptance run. Prints one PASS/FAIL line per criterion and exits with a
//! non-zero status if any criterion fails. Built with `harness = false` so
//! the lines appear in plain `cargo test` output.

use std::collections::BTreeMap;
use std::error::Error;
use std::time::{Duration, Instant};

use chart_core::{default_base_step, halton_points, ToleranceClass, DEFAULT_MARGIN};
use connections::{
    affine_combination, alpha_connection, alpha_density, difference_tensor, dual_density,
    equiaffine_residual, holds, metric_density, product_density, structure_residuals, trace_left,
    BundleKind, GeometryBundle,
};
use curvature::{alpha_riemann_direct, PointCurvature};
use einstein::{einstein_divergence_statistical, einstein_of, h_tensor_of, EinsteinSource};
use igcurv::{
    convergence, run, suite_for, to_json, verify_bundle, ConvergenceReport, VerifyOptions,
    VerifyReport, DEFAULT_SWEEP, REGISTRY,
};
use manifold_zoo::{
    builtin_by_name, equiaffine_case, euclidean, gaussian_family, random_bundle, sphere,
    structural_family, traceless_statistical, BUILTIN_NAMES,
};

type Outcome = Result<Verdict, Box<dyn Error>>;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }
}

const ALGEBRAIC: f64 = 1e-9;
const DIFFERENTIAL: f64 = 5e-5;
const H: f64 = 1e-4;

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn dim_for(seed: u64) -> usize {
    2 + (seed % 2) as usize
}

fn algebraic_suite() -> Outcome {
    let mut opts = VerifyOptions::new(20, 0, default_base_step());
    opts.threads = Some(1);
    opts.class = Some(ToleranceClass::Algebraic);
    let mut worst = 0.0_f64;
    let mut checks = 0;
    let mut failures = Vec::new();
    for kind in [BundleKind::Statistical, BundleKind::QuasiStatistical] {
        for seed in 0..100 {
            let b = random_bundle(kind, dim_for(seed), seed)?;
            let report = verify_bundle(&b, &opts)?;
            for o in &report.identities {
                checks += 1;
                worst = worst.max(o.max_relative.unwrap_or(0.0));
                if !o.pass || o.max_relative.is_some_and(|r| r.is_nan() || r > ALGEBRAIC) {
                    failures.push(format!("{} {}", b.name, o.name));
                }
            }
        }
    }
    Ok(Verdict::new(
        failures.is_empty(),
        format!(
            "200 bundles, {checks} identity checks, worst relative {worst:.3e}, failures {failures:?}"
        ),
    ))
}

/// Identities whose residual is formed from exact jets alone, so a step
/// sweep can only show a rounding plateau.
const EXACT_IN_JETS: [&str; 1] = ["equiaffine_ricci_symmetry"];

fn differential_suite() -> Outcome {
    let mut opts = VerifyOptions::new(5, 0, H);
    opts.class = Some(ToleranceClass::Differential);
    let mut bundles: Vec<GeometryBundle> = Vec::new();
    for seed in 0..10 {
        bundles.push(random_bundle(BundleKind::Statistical, dim_for(seed), seed)?);
        bundles.push(random_bundle(
            BundleKind::QuasiStatistical,
            dim_for(seed),
            seed,
        )?);
    }
    for seed in 0..4 {
        bundles.push(equiaffine_case(dim_for(seed), seed)?.0);
        bundles.push(traceless_statistical(dim_for(seed), seed)?);
    }

    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    let mut failures = Vec::new();
    for b in &bundles {
        let report = verify_bundle(b, &opts)?;
        for o in &report.identities {
            if let Some(r) = o.max_relative {
                let w = worst.entry(identity_name(&o.name)).or_insert(0.0);
                *w = w.max(r);
                if r.is_nan() || r > DIFFERENTIAL {
                    failures.push(format!("{} {}: {r:e}", b.name, o.name));
                }
            }
        }
    }
    let differential: Vec<&str> = REGISTRY
        .iter()
        .filter(|id| id.class == ToleranceClass::Differential)
        .map(|id| id.name)
        .collect();
    let unexercised: Vec<&str> = differential
        .iter()
        .copied()
        .filter(|n| !worst.contains_key(n))
        .collect();

    let sweep_bundles = [
        random_bundle(BundleKind::Statistical, 3, 1)?,
        random_bundle(BundleKind::QuasiStatistical, 3, 1)?,
        equiaffine_case(3, 0)?.0,
        traceless_statistical(3, 0)?,
    ];
    let mut orders: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    let mut second_order: BTreeMap<&str, bool> = BTreeMap::new();
    for b in &sweep_bundles {
        for name in &differential {
            let id = REGISTRY.iter().find(|id| id.name == *name).unwrap();
            if !id.scope.admits(b.kind) {
                continue;
            }
            // Conditional identities whose hypothesis fails on this bundle
            // are reported as usage errors and skipped here.
            let Ok(report) = convergence(b, name, &DEFAULT_SWEEP, 3, 0) else {
                continue;
            };
            if !report.meets_expectation {
                failures.push(format!("{} {name}: {}", b.name, report.order_class));
            }
            *second_order.entry(name).or_default() |= report.order_class == "second_order";
            orders.entry(name).or_default().push(format!(
                "{}={}",
                report.order_class,
                report
                    .fitted_order
                    .map_or("-".to_string(), |p| format!("{p:.3}"))
            ));
        }
    }
    let mut no_order = Vec::new();
    for name in &differential {
        let shown = second_order.get(name).copied().unwrap_or(false);
        if EXACT_IN_JETS.contains(name) {
            if shown {
                no_order.push(format!("{name} unexpectedly has a truncation error"));
            }
        } else if !shown {
            no_order.push(format!("{name}: {:?}", orders.get(name)));
        }
    }
    let worst_all = worst.values().fold(0.0_f64, |m, x| m.max(*x));
    Ok(Verdict::new(
        failures.is_empty() && unexercised.is_empty() && no_order.is_empty(),
        format!(
            "{} bundles at h = 1e-4, worst relative {worst_all:.3e}; every truncation-bearing identity fits p in [1.8, 2.2]; \
             failures {failures:?}, unexercised {unexercised:?}, missing order {no_order:?}",
            bundles.len()
        ),
    ))
}

fn identity_name(name: &str) -> &'static str {
    REGISTRY
        .iter()
        .find(|id| id.name == name)
        .map(|id| id.name)
        .unwrap_or("unknown")
}

fn equivalence_chains() -> Outcome {
    let mut counterexamples = Vec::new();
    let mut outcomes = [[0usize; 2]; 2];
    let mut alone = [0usize; 4];
    let mut points = 0;
    for seed in 0..50 {
        for b in structural_family(dim_for(seed), seed)? {
            for p in halton_points(&b.domain, 10, seed, DEFAULT_MARGIN) {
                let r = structure_residuals(&b, &p)?;
                points += 1;
                let chains = [
                    [
                        holds(&r.torsions_equal),
                        holds(&r.cubic_totally_symmetric),
                        holds(&r.average_torsion_is_torsion),
                        holds(&r.difference_symmetric),
                    ],
                    [
                        holds(&r.torsion_free),
                        holds(&r.cubic_skew_is_dual_torsion),
                        holds(&r.dual_torsion_is_twice_average),
                        holds(&r.difference_skew_is_dual_torsion),
                    ],
                ];
                for (c, flags) in chains.iter().enumerate() {
                    outcomes[c][flags[0] as usize] += 1;
                    if flags.iter().any(|f| *f != flags[0]) {
                        counterexamples.push(format!("{} chain {c}: {flags:?}", b.name));
                    }
                }
                let statistical = [
                    holds(&r.torsion_free),
                    holds(&r.dual_torsion_free),
                    holds(&r.cubic_totally_symmetric),
                    holds(&r.average_is_levi_civita),
                ];
                let count = statistical.iter().filter(|f| **f).count();
                if (2..4).contains(&count) {
                    counterexamples.push(format!("{} any-two: {statistical:?}", b.name));
                }
                if count == 1 {
                    alone[statistical.iter().position(|f| *f).unwrap()] += 1;
                }
            }
        }
    }
    let nonvacuous = outcomes.iter().all(|o| o[0] > 0 && o[1] > 0) && alone.iter().all(|&n| n > 0);
    Ok(Verdict::new(
        counterexamples.is_empty() && nonvacuous,
        format!(
            "50 seeds, {points} points, counterexamples {}, chain outcomes {outcomes:?}, single conditions {alone:?}",
            counterexamples.len()
        ),
    ))
}

fn dually_flat_benchmark() -> Outcome {
    let b = gaussian_family()?;
    let mut flat = 0.0_f64;
    let mut average = 0.0_f64;
    for p in halton_points(&b.domain, 50, 0, DEFAULT_MARGIN) {
        let pc = PointCurvature::at(&b, &p)?;
        flat = flat
            .max(alpha_riemann_direct(&pc, 1.0).max_abs())
            .max(alpha_riemann_direct(&pc, -1.0).max_abs());
        average = average.max(alpha_riemann_direct(&pc, 0.0).max_abs());
    }
    Ok(Verdict::new(
        flat <= 1e-6 && average >= 1e-3,
        format!("max|R(±1)| {flat:.3e} (≤ 1e-6), max|R(0)| {average:.3e} (≥ 1e-3)"),
    ))
}

fn classical_limits() -> Outcome {
    let s = sphere(1.0)?;
    let mut scalar_err = 0.0_f64;
    let mut divergence = 0.0_f64;
    let mut divergence_ok = true;
    for p in halton_points(&s.domain, 20, 0, DEFAULT_MARGIN) {
        let pc = PointCurvature::at(&s, &p)?;
        scalar_err = scalar_err.max((pc.ric.scalar - 2.0).abs());
        let report = einstein_divergence_statistical(&s, &p, H)?;
        divergence = divergence.max(max_abs(&report.nabla_of_g.lhs));
        divergence_ok &= report.nabla_of_g.residual.relative() <= DIFFERENTIAL;
    }
    let mut flat = 0.0_f64;
    for dim in [2, 3, 4] {
        let e = euclidean(dim)?;
        for p in halton_points(&e.domain, 10, 0, DEFAULT_MARGIN) {
            let pc = PointCurvature::at(&e, &p)?;
            let report = einstein_divergence_statistical(&e, &p, H)?;
            let mut outputs = vec![
                pc.r.max_abs(),
                max_abs(&pc.ric.tensor),
                pc.ric.scalar.abs(),
                max_abs(&einstein_of(&pc, EinsteinSource::Nabla).tensor),
                max_abs(&einstein_of(&pc, EinsteinSource::Alpha(0.3)).tensor),
                max_abs(&h_tensor_of(&pc)),
            ];
            for (_, entry) in report.entries() {
                outputs.push(max_abs(&entry.lhs));
                outputs.push(max_abs(&entry.rhs));
            }
            flat = outputs.into_iter().fold(flat, f64::max);
        }
    }
    Ok(Verdict::new(
        scalar_err <= 1e-6 && divergence <= DIFFERENTIAL && divergence_ok && flat <= 1e-12,
        format!(
            "sphere(1) |scalar − 2| {scalar_err:.3e}, |∇ⁱG_ij| {divergence:.3e}; euclidean max output {flat:.3e}"
        ),
    ))
}

fn equiaffine_suite() -> Outcome {
    let mut worst = 0.0_f64;
    let mut wrong_density_caught = true;
    let mut equivalence_ok = true;
    for seed in 0..20 {
        let n = dim_for(seed);
        let (b, lambda) = equiaffine_case(n, seed)?;
        let dual_vol = dual_density(&b.metric, &lambda);
        for p in halton_points(&b.domain, 5, 0, DEFAULT_MARGIN) {
            worst = worst
                .max(equiaffine_residual(&b.nabla, &b.metric, &lambda, &p, H)?.max_relative())
                .max(
                    equiaffine_residual(&b.nabla_star, &b.metric, &dual_vol, &p, H)?.max_relative(),
                );
            let wrong = equiaffine_residual(&b.nabla_star, &b.metric, &lambda, &p, H)?;
            wrong_density_caught &= wrong.trace_form.relative() > 1e-3;
        }
        for alpha in [0.5, -0.3, 0.0, 2.0] {
            let conn = alpha_connection(&b.nabla, &b.nabla_star, alpha)?;
            let vol = alpha_density(&b.metric, &lambda, alpha);
            for p in halton_points(&b.domain, 3, 0, DEFAULT_MARGIN) {
                worst =
                    worst.max(equiaffine_residual(&conn, &b.metric, &vol, &p, H)?.max_relative());
            }
        }
        let (other, mu) = equiaffine_case(n, seed + 1000)?;
        for (a, c) in [(0.3, 0.7), (2.0, -1.0)] {
            let conn = affine_combination(a, &b.nabla, c, &other.nabla)?;
            let vol = product_density(&lambda, a, &mu, c);
            for p in halton_points(&b.domain, 3, 0, DEFAULT_MARGIN) {
                let r = equiaffine_residual(&conn, &b.metric, &vol, &p, H)?;
                worst = worst.max(r.trace_form.relative());
            }
        }
        for (sb, expect) in [
            (traceless_statistical(n, seed)?, true),
            (random_bundle(BundleKind::Statistical, n, seed)?, false),
        ] {
            let vol = metric_density(&sb.metric);
            for p in halton_points(&sb.domain, 3, 0, DEFAULT_MARGIN) {
                let r = equiaffine_residual(&sb.nabla, &sb.metric, &vol, &p, H)?;
                let rs = equiaffine_residual(&sb.nabla_star, &sb.metric, &vol, &p, H)?;
                let k = difference_tensor(&sb.nabla, &sb.nabla_star, &p)?;
                let tr = trace_left(&k)?.max_abs() / k.max_abs();
                let flags = [
                    r.trace_form.relative() <= DIFFERENTIAL,
                    rs.trace_form.relative() <= DIFFERENTIAL,
                    tr <= DIFFERENTIAL,
                ];
                equivalence_ok &= flags.iter().all(|f| *f == expect);
                if expect {
                    worst = worst.max(r.max_relative()).max(rs.max_relative());
                }
            }
        }
    }
    Ok(Verdict::new(
        worst <= DIFFERENTIAL && wrong_density_caught && equivalence_ok,
        format!(
            "20 cases, worst relative {worst:.3e}, wrong density rejected {wrong_density_caught}, statistical equivalences {equivalence_ok}"
        ),
    ))
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("igcurv").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).expect("utf-8 stdout"),
        String::from_utf8(err).expect("utf-8 stderr"),
    )
}

const CORRUPTED_DUAL: &str = r#"{"dim": 2, "domain": [[0.5, 1.5], [-1, 1]], "metric": {"kind": "diag", "entries": [1, {"20": 1}]}, "cubic": "zero", "nabla_star_perturbation": {"terms": {"111": {"01": 0.3}}}}"#;

fn cli_contract() -> Outcome {
    let mut problems = Vec::new();
    for name in BUILTIN_NAMES {
        let args = ["verify", name, "--points", "4", "--json"];
        let (code, first, _) = cli(&args);
        let (_, second, _) = cli(&args);
        let (_, threaded, _) = cli(&[&args[..], &["--threads", "3"]].concat());
        if code != 0 {
            problems.push(format!("{name}: exit {code}"));
        }
        if first != second || first != threaded {
            problems.push(format!("{name}: output differs between runs"));
        }
        let report: VerifyReport = serde_json::from_str(&first)?;
        if to_json(&report) != first {
            problems.push(format!("{name}: JSON does not round-trip"));
        }
        let expected = suite_for(builtin_by_name(name)?.kind).len();
        let mut seen: Vec<&str> = report.identities.iter().map(|o| o.name.as_str()).collect();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != report.identities.len() || seen.len() != expected {
            problems.push(format!(
                "{name}: suite has {} entries",
                report.identities.len()
            ));
        }
        let (csv_a, csv_b) = (
            cli(&["verify", name, "--points", "2", "--csv"]).1,
            cli(&["verify", name, "--points", "2", "--csv"]).1,
        );
        if csv_a != csv_b || csv_a.contains('\r') {
            problems.push(format!("{name}: CSV not deterministic LF"));
        }
    }

    let (code, out, _) = cli(&["verify", CORRUPTED_DUAL, "--points", "3", "--json"]);
    let report: VerifyReport = serde_json::from_str(&out)?;
    if code != 1 || report.first_failure.as_deref() != Some("duality") {
        problems.push(format!(
            "corrupted dual: exit {code}, first failure {:?}",
            report.first_failure
        ));
    }
    for bad in [
        vec!["verify", r#"{"dim": 9}"#],
        vec!["verify", "no_such_manifold"],
        vec!["verify"],
        vec!["convergence", "sphere:1", "--identity", "no_such_identity"],
    ] {
        let (code, _, err) = cli(&bad);
        if code != 2 || err.is_empty() {
            problems.push(format!("{bad:?}: exit {code}"));
        }
    }

    let mut classes = Vec::new();
    for (identity, expected) in [
        ("duality", "rounding_plateau"),
        ("bianchi_second", "second_order"),
    ] {
        let (code, out, _) = cli(&[
            "convergence",
            "random_statistical:3:1",
            "--identity",
            identity,
            "--json",
        ]);
        let report: ConvergenceReport = serde_json::from_str(&out)?;
        if code != 0 || report.order_class != expected || !report.meets_expectation {
            problems.push(format!("convergence {identity}: {}", report.order_class));
        }
        classes.push(format!("{identity} {}", report.order_class));
    }
    Ok(Verdict::new(
        problems.is_empty(),
        format!(
            "{} built-ins verified, corrupted dual exits 1 at duality, usage errors exit 2, convergence {classes:?}; problems {problems:?}",
            BUILTIN_NAMES.len()
        ),
    ))
}

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn main() {
    let criteria: [Criterion; 7] = [
        (
            "algebraic identity suite",
            algebraic_suite,
            Some(Duration::from_secs(120)),
        ),
        (
            "differential identity suite",
            differential_suite,
            Some(Duration::from_secs(300)),
        ),
        ("equivalence chains", equivalence_chains, None),
        ("dually flat benchmark", dually_flat_benchmark, None),
        ("classical limits", classical_limits, None),
        ("equiaffine suite", equiaffine_suite, None),
        ("CLI contract", cli_contract, None),
    ];
    let mut failed = 0;
    for (n, (title, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_budget = budget.is_none_or(|b| elapsed <= b);
        let (pass, detail) = match outcome {
            Ok(v) => (v.pass && in_budget, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        let budget_note = budget.map_or(String::new(), |b| format!(", budget {}s", b.as_secs()));
        println!(
            "criterion {}: {} {title} ({:.1}s{budget_note}) {detail}",
            n + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
