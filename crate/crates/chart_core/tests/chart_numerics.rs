use chart_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalar_field(domain: Domain, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> ChartField {
    ChartField::new(domain.dim(), vec![], domain, move |p| {
        Ok(TensorComponents::scalar(f(p.coords())))
    })
}

fn plane() -> Domain {
    Domain::cube(2, -10.0, 10.0).unwrap()
}

fn pt(c: &[f64]) -> ChartPoint {
    ChartPoint::new(c.to_vec()).unwrap()
}

#[test]
fn central_difference_is_exact_on_affine_fields() {
    let f = scalar_field(plane(), |x| 3.0 * x[0] + 2.0);
    let p = pt(&[0.3, -1.2]);
    // Only rounding remains, amplified by 1/h; a per-field step of 1e-2
    // keeps it below 1e-12.
    let coarse = f.clone().with_step(1e-2).unwrap();
    let d = partial_derivative(&coarse, &p, 0).unwrap();
    assert!((d.data()[0] - 3.0).abs() <= 1e-12);
    let h = axis_step(f.fd_step(), 0.3);
    let d = partial_derivative(&f, &p, 0).unwrap();
    assert!((d.data()[0] - 3.0).abs() <= 4.0 * f64::EPSILON * 2.9 / h);
}

#[test]
fn central_difference_is_exact_on_quadratics() {
    let f = scalar_field(plane(), |x| x[0] * x[0]);
    let d = partial_derivative(&f, &pt(&[2.0, 0.0]), 0).unwrap();
    assert!((d.data()[0] - 4.0).abs() <= 1e-10);
}

#[test]
fn central_difference_converges_at_second_order() {
    let f = scalar_field(plane(), |x| x[0].sin());
    let p = pt(&[1.0, 0.0]);
    let errs: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|h| {
            (partial_derivative_with_step(&f, &p, 0, *h).unwrap().data()[0] - 1f64.cos()).abs()
        })
        .collect();
    for w in errs.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.2..=0.3).contains(&ratio), "ratio {ratio}");
    }
    let order = fit_order(&[1e-2, 5e-3, 2.5e-3], &errs).unwrap();
    assert!((order - 2.0).abs() < 0.05);
}

#[test]
fn stencil_leaving_the_domain_is_reported() {
    let d = Domain::cube(2, 0.0, 1.0).unwrap();
    let f = scalar_field(d, |x| x[0]);
    let err = partial_derivative_with_step(&f, &pt(&[1.0, 0.5]), 0, 1e-3).unwrap_err();
    match err {
        ChartError::DomainEscape { stencil, axis, .. } => {
            assert_eq!(axis, 0);
            assert!(stencil[0] > 1.0);
        }
        other => panic!("unexpected {other:?}"),
    }
}

fn matrix_field(
    domain: Domain,
    f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
) -> ChartField {
    let n = domain.dim();
    ChartField::new(
        n,
        vec![Variance::Lower, Variance::Lower],
        domain,
        move |p| {
            TensorComponents::from_vec(n, vec![Variance::Lower, Variance::Lower], f(p.coords()))
        },
    )
}

#[test]
fn identity_metric() {
    let g = matrix_field(plane(), |_| vec![1.0, 0.0, 0.0, 1.0]);
    let m = metric_at(&g, &pt(&[0.1, 0.2])).unwrap();
    assert_eq!(m.g_inv.data(), &[1.0, 0.0, 0.0, 1.0]);
    assert_eq!(m.det_g, 1.0);
    assert_eq!(m.signature, vec![1, 1]);
}

#[test]
fn fisher_shaped_diagonal_metric() {
    let g = matrix_field(Domain::new(vec![-1.0, 0.5], vec![1.0, 4.0]).unwrap(), |x| {
        let s2 = x[1] * x[1];
        vec![1.0 / s2, 0.0, 0.0, 2.0 / s2]
    });
    let m = metric_at(&g, &pt(&[0.0, 2.0])).unwrap();
    assert!((m.g_inv.get(&[0, 0]) - 4.0).abs() < 1e-14);
    assert!((m.g_inv.get(&[1, 1]) - 2.0).abs() < 1e-14);
    assert!((m.det_g - 0.125).abs() < 1e-15);
}

#[test]
fn lorentzian_signature_and_singular_rejection() {
    let g = matrix_field(plane(), |_| vec![-1.0, 0.0, 0.0, 4.0]);
    let m = metric_at(&g, &pt(&[0.0, 0.0])).unwrap();
    assert_eq!(m.signature, vec![-1, 1]);
    assert_eq!(m.sqrt_abs_det, 2.0);
    let bad = matrix_field(plane(), |_| vec![1.0, 1.0, 1.0, 1.0]);
    assert!(matches!(
        metric_at(&bad, &pt(&[0.0, 0.0])),
        Err(ChartError::SingularMetric { .. })
    ));
    let skew = matrix_field(plane(), |_| vec![1.0, 0.1, 0.0, 1.0]);
    assert!(matches!(
        metric_at(&skew, &pt(&[0.0, 0.0])),
        Err(ChartError::AsymmetricMetric { .. })
    ));
}

#[test]
fn random_spd_inverse_over_many_seeds() {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + (seed as usize % 3);
        let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = (0..n).map(|k| a[i * n + k] * a[j * n + k]).sum::<f64>()
                    + if i == j { 1.0 } else { 0.0 };
            }
        }
        let m = MetricAtPoint::from_components(
            TensorComponents::from_vec(n, vec![Variance::Lower, Variance::Lower], g.clone())
                .unwrap(),
        )
        .unwrap();
        for i in 0..n {
            for j in 0..n {
                let prod: f64 = (0..n).map(|k| g[i * n + k] * m.g_inv.get(&[k, j])).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((prod - target).abs() <= 1e-12, "seed {seed}");
            }
        }
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let back = m.raise(&m.lower(&v));
        for (x, y) in v.iter().zip(&back) {
            assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }
}

#[test]
fn log_volume_gradient_of_constant_metric_vanishes() {
    let g = matrix_field(plane(), |_| vec![2.0, 0.3, 0.3, 1.0]);
    let r = log_sqrt_det_gradient_routes(&g, &pt(&[0.5, 0.5])).unwrap();
    assert!(r.contraction.max_abs() < 1e-12);
    assert!(r.direct.max_abs() < 1e-12);
}

#[test]
fn log_volume_gradient_of_polar_metric() {
    // log sqrt|g| = log x, so the gradient at x = 2 is (1/2, 0).
    let g = matrix_field(Domain::new(vec![0.5, -3.0], vec![4.0, 3.0]).unwrap(), |x| {
        vec![1.0, 0.0, 0.0, x[0] * x[0]]
    });
    let r = log_sqrt_det_gradient_routes(&g, &pt(&[2.0, 0.3])).unwrap();
    for route in [&r.contraction, &r.direct] {
        assert!((route.get(&[0]) - 0.5).abs() < 1e-8);
        assert!(route.get(&[1]).abs() < 1e-8);
    }
}

#[test]
fn log_volume_gradient_of_fisher_metric() {
    // log sqrt|g| = ½ log 2 - 2 log σ, so the gradient at σ = 1 is (0, -2).
    let g = matrix_field(Domain::new(vec![-1.0, 0.5], vec![1.0, 2.0]).unwrap(), |x| {
        let s2 = x[1] * x[1];
        vec![1.0 / s2, 0.0, 0.0, 2.0 / s2]
    });
    let p = pt(&[0.2, 1.0]);
    let grad = log_sqrt_det_gradient(&g, &p).unwrap();
    assert!(grad.get(&[0]).abs() < 1e-8);
    assert!((grad.get(&[1]) + 2.0).abs() < 1e-8);
    let r = log_sqrt_det_gradient_routes(&g, &p).unwrap();
    let gap = r
        .contraction
        .combine(1.0, &r.direct, -1.0)
        .unwrap()
        .max_abs();
    assert!(gap <= ToleranceClass::Differential.tolerance());
}

#[test]
fn smooth_field_jets_match_finite_differences() {
    let d = Domain::cube(2, -2.0, 2.0).unwrap();
    let f = SmoothField::new(2, vec![], d, |x| vec![(x[0] * x[1]).sin() + x[1].exp()]);
    let p = pt(&[0.4, -0.3]);
    let jet = f.jets(&p).unwrap()[0];
    let cf = f.to_chart_field();
    for a in 0..2 {
        let fd = partial_derivative(&cf, &p, a).unwrap().data()[0];
        assert!((fd - jet.d[a]).abs() < 1e-8);
    }
}

proptest! {
    #[test]
    fn finite_differences_are_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, x in -1.0f64..1.0, y in -1.0f64..1.0, rank in 0usize..=3) {
        let d = Domain::cube(2, -5.0, 5.0).unwrap();
        let var = vec![Variance::Lower; rank];
        let len = 2usize.pow(rank as u32);
        let mk = |phase: f64| {
            let var = var.clone();
            ChartField::new(2, var.clone(), d.clone(), move |p| {
                let c = p.coords();
                let data = (0..len).map(|k| (c[0] * (k as f64 + 1.0) + phase).sin() * c[1].cos()).collect();
                TensorComponents::from_vec(2, var.clone(), data)
            })
        };
        let f = mk(0.1);
        let g = mk(0.7);
        let (f2, g2) = (f.clone(), g.clone());
        let combo = ChartField::new(2, var.clone(), d.clone(), move |p| {
            f2.eval(p)?.combine(a, &g2.eval(p)?, b)
        });
        let p = ChartPoint::new(vec![x, y]).unwrap();
        for axis in 0..2 {
            let lhs = partial_derivative(&combo, &p, axis).unwrap();
            let rhs = partial_derivative(&f, &p, axis).unwrap().combine(a, &partial_derivative(&g, &p, axis).unwrap(), b).unwrap();
            // Rounding in the stencil values is amplified by 1/h, so the
            // reference magnitude is that of the difference-quotient terms.
            let h = axis_step(f.fd_step(), p.coords()[axis]);
            let values = f.eval(&p).unwrap().max_abs().max(g.eval(&p).unwrap().max_abs());
            let scale = (a.abs() + b.abs()) * values / h;
            let gap = lhs.combine(1.0, &rhs, -1.0).unwrap().max_abs();
            prop_assert!(gap <= 1e-12 * scale, "gap {} scale {}", gap, scale);
        }
    }
}
