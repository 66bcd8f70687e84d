use chart_core::{halton_points, ChartError, DEFAULT_BASE_STEP, DEFAULT_MARGIN};
use connections::{
    affine_combination, alpha_connection, alpha_density, dual_density, equiaffine_residual,
    levi_civita, metric_density, product_density, trace_left, BundleKind, ConnectionError,
    EquiaffineResidual,
};
use manifold_zoo::{equiaffine_case, random_bundle, traceless_statistical};

const TOL: f64 = 5e-5;
const CASES: u64 = 20;

fn dim_for(seed: u64) -> usize {
    2 + (seed % 2) as usize
}

fn assert_equiaffine(label: &str, r: EquiaffineResidual) {
    assert!(r.max_relative() <= TOL, "{label}: {r:?}");
}

#[test]
fn levi_civita_parallelizes_metric_volume() {
    for seed in 0..CASES {
        let b = random_bundle(BundleKind::General, dim_for(seed), seed).unwrap();
        let lc = levi_civita(&b.metric);
        let vol = metric_density(&b.metric);
        for p in halton_points(&b.domain, 5, 0, DEFAULT_MARGIN) {
            let r = equiaffine_residual(&lc, &b.metric, &vol, &p, DEFAULT_BASE_STEP).unwrap();
            assert!(r.trace_form.relative() <= 1e-6, "seed {seed}: {r:?}");
            assert_equiaffine("levi-civita", r);
        }
    }
}

#[test]
fn constructed_cases_and_their_duals() {
    for seed in 0..CASES {
        let (b, lambda) = equiaffine_case(dim_for(seed), seed).unwrap();
        let dual_vol = dual_density(&b.metric, &lambda);
        for p in halton_points(&b.domain, 5, 0, DEFAULT_MARGIN) {
            assert_equiaffine(
                "nabla",
                equiaffine_residual(&b.nabla, &b.metric, &lambda, &p, DEFAULT_BASE_STEP).unwrap(),
            );
            assert_equiaffine(
                "dual",
                equiaffine_residual(&b.nabla_star, &b.metric, &dual_vol, &p, DEFAULT_BASE_STEP)
                    .unwrap(),
            );
            // The wrong density must fail, so the check has teeth.
            let wrong =
                equiaffine_residual(&b.nabla_star, &b.metric, &lambda, &p, DEFAULT_BASE_STEP)
                    .unwrap();
            assert!(wrong.trace_form.relative() > 1e-3);
        }
    }
}

#[test]
fn alpha_connection_volume() {
    for seed in 0..CASES {
        let (b, lambda) = equiaffine_case(dim_for(seed), seed).unwrap();
        for alpha in [0.5, -0.3, 0.0, 2.0] {
            let conn = alpha_connection(&b.nabla, &b.nabla_star, alpha).unwrap();
            let vol = alpha_density(&b.metric, &lambda, alpha);
            for p in halton_points(&b.domain, 3, 0, DEFAULT_MARGIN) {
                assert_equiaffine(
                    "alpha",
                    equiaffine_residual(&conn, &b.metric, &vol, &p, DEFAULT_BASE_STEP).unwrap(),
                );
            }
        }
    }
}

#[test]
fn sum_of_equiaffine_connections() {
    for seed in 0..CASES {
        let n = dim_for(seed);
        let (b1, l1) = equiaffine_case(n, seed).unwrap();
        let (b2, l2) = equiaffine_case(n, seed + 1000).unwrap();
        for (a, c) in [(0.3, 0.7), (2.0, -1.0)] {
            let conn = affine_combination(a, &b1.nabla, c, &b2.nabla).unwrap();
            let vol = product_density(&l1, a, &l2, c);
            for p in halton_points(&b1.domain, 3, 0, DEFAULT_MARGIN) {
                let r =
                    equiaffine_residual(&conn, &b1.metric, &vol, &p, DEFAULT_BASE_STEP).unwrap();
                assert!(r.trace_form.relative() <= TOL, "({a}, {c}): {r:?}");
            }
        }
    }
}

#[test]
fn statistical_equiaffine_conditions_agree() {
    // For a statistical bundle, ∇ parallel to √|g|, ∇* parallel to √|g| and
    // Tr₂(K) = 0 are equivalent; check both a trace-free and a generic cubic.
    for seed in 0..CASES {
        let n = dim_for(seed);
        for (b, expect) in [
            (traceless_statistical(n, seed).unwrap(), true),
            (
                random_bundle(BundleKind::Statistical, n, seed).unwrap(),
                false,
            ),
        ] {
            let vol = metric_density(&b.metric);
            for p in halton_points(&b.domain, 3, 0, DEFAULT_MARGIN) {
                let r =
                    equiaffine_residual(&b.nabla, &b.metric, &vol, &p, DEFAULT_BASE_STEP).unwrap();
                let rs = equiaffine_residual(&b.nabla_star, &b.metric, &vol, &p, DEFAULT_BASE_STEP)
                    .unwrap();
                let k = connections::difference_tensor(&b.nabla, &b.nabla_star, &p).unwrap();
                let tr = trace_left(&k).unwrap().max_abs() / k.max_abs();
                let flags = [
                    r.trace_form.relative() <= TOL,
                    rs.trace_form.relative() <= TOL,
                    tr <= TOL,
                ];
                assert!(flags.iter().all(|f| *f == expect), "{}: {flags:?}", b.name);
            }
        }
    }
}

#[test]
fn nonpositive_volume_is_rejected() {
    let (b, lambda) = equiaffine_case(2, 1).unwrap();
    let neg = product_density(&lambda, 1.0, &lambda, 0.0);
    let neg = chart_core::SmoothField::new(2, Vec::new(), b.domain.clone(), move |x| {
        vec![neg.eval_jets(x)[0].scale(-1.0)]
    });
    let p = halton_points(&b.domain, 1, 0, DEFAULT_MARGIN).remove(0);
    assert!(matches!(
        equiaffine_residual(&b.nabla, &b.metric, &neg, &p, DEFAULT_BASE_STEP),
        Err(ConnectionError::Chart(ChartError::NonpositiveVolume { .. }))
    ));
}
