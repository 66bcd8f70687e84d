use chart_core::{
    halton_points, ChartPoint, Domain, Jet1, ToleranceClass, Variance, DEFAULT_MARGIN,
};
use connections::{BundleKind, ConnectionField};
use curvature::{
    alpha_ricci_blend, alpha_ricci_direct, alpha_ricci_residual, alpha_riemann_blend,
    alpha_riemann_direct, alpha_riemann_residual, covariant_derivative_jets,
    duality_curvature_residual, first_pair_residual, last_pair_residual, quadratic_ricci,
    ricci_decomposition_residuals, riemann, riemann_christoffel, statistical_residuals,
    universal_residuals, CurvatureError, PointCurvature,
};
use manifold_zoo::{
    euclidean, flat_constant_cubic, gaussian_family, random_bundle, sphere, traceless_statistical,
};

fn points(domain: &Domain, count: usize) -> Vec<ChartPoint> {
    halton_points(domain, count, 1, DEFAULT_MARGIN)
}

fn names(list: &[curvature::NamedResidual]) -> Vec<&'static str> {
    list.iter().map(|n| n.name).collect()
}

#[test]
fn flat_connection_has_zero_curvature() {
    let domain = Domain::cube(3, -1.0, 1.0).unwrap();
    let flat = ConnectionField::flat(3, domain.clone());
    for p in points(&domain, 5) {
        assert_eq!(riemann(&flat, &p).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn riemann_rejects_points_outside_the_domain() {
    let domain = Domain::cube(2, -1.0, 1.0).unwrap();
    let flat = ConnectionField::flat(2, domain);
    let p = ChartPoint::new(vec![3.0, 0.0]).unwrap();
    assert!(matches!(riemann(&flat, &p), Err(CurvatureError::Chart(_))));
}

#[test]
fn round_sphere_scalar_curvature() {
    for radius in [1.0, 2.5] {
        let b = sphere(radius).unwrap();
        for p in points(&b.domain, 20) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            let expected = 2.0 / (radius * radius);
            assert!(
                (pc.ric.scalar - expected).abs() <= 1e-6,
                "{}",
                pc.ric.scalar
            );
        }
    }
}

#[test]
fn euclidean_curvature_vanishes() {
    let b = euclidean(3).unwrap();
    for p in points(&b.domain, 10) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        assert!(pc.r.max_abs() <= 1e-12);
        assert!(pc.ric.scalar.abs() <= 1e-12);
    }
}

#[test]
fn gaussian_family_is_dually_flat_but_not_flat_for_the_average() {
    let b = gaussian_family().unwrap();
    let mut max_pm: f64 = 0.0;
    let mut max_avg: f64 = 0.0;
    for p in points(&b.domain, 50) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        max_pm = max_pm
            .max(alpha_riemann_direct(&pc, 1.0).max_abs())
            .max(alpha_riemann_direct(&pc, -1.0).max_abs());
        max_avg = max_avg.max(alpha_riemann_direct(&pc, 0.0).max_abs());
    }
    assert!(max_pm <= 1e-6, "{max_pm:e}");
    assert!(max_avg >= 1e-3, "{max_avg:e}");
}

#[test]
fn ricci_symmetric_part_is_exactly_symmetric() {
    let b = random_bundle(BundleKind::General, 3, 4).unwrap();
    for p in points(&b.domain, 5) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(pc.ric.symmetric[i * 3 + j], pc.ric.symmetric[j * 3 + i]);
            }
        }
    }
}

#[test]
fn lowered_curvature_antisymmetries() {
    for seed in 0..3 {
        let b = random_bundle(BundleKind::Statistical, 3, seed).unwrap();
        for p in points(&b.domain, 5) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            let rc = riemann_christoffel(&pc.g, &pc.r);
            assert_eq!(last_pair_residual(&rc, 3).abs, 0.0);
            // The average of a dual pair is metric, so its lowered curvature
            // is antisymmetric in the first pair as well.
            let rc_avg = riemann_christoffel(&pc.g, &pc.r_avg);
            assert!(first_pair_residual(&rc_avg, 3).passes(ToleranceClass::Algebraic));
            let non_metric = first_pair_residual(&rc, 3).relative();
            println!("seed {seed}: first-pair residual of non-metric nabla {non_metric:e}");
        }
    }
}

#[test]
fn duality_holds_for_statistical_and_quasi_bundles() {
    for kind in [BundleKind::Statistical, BundleKind::QuasiStatistical] {
        for seed in 0..3 {
            let b = random_bundle(kind, 3, seed).unwrap();
            for p in points(&b.domain, 20) {
                let pc = PointCurvature::at(&b, &p).unwrap();
                let r = duality_curvature_residual(&pc);
                assert!(r.relative() <= 1e-9, "{kind}: {:e}", r.relative());
                assert!(r.scale > 1e-3);
            }
        }
    }
}

#[test]
fn levi_civita_duality_reduces_to_first_pair_antisymmetry() {
    let b = sphere(1.0).unwrap();
    for p in points(&b.domain, 5) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        let rc = riemann_christoffel(&pc.g, &pc.r);
        let a = duality_curvature_residual(&pc).relative();
        let c = first_pair_residual(&rc, 2).relative();
        assert!(a <= 1e-9 && c <= 1e-9);
    }
}

#[test]
fn covariant_derivative_obeys_the_product_rule() {
    // ∇(g_{ma} K^a_{bc}) = (∇g)_{ma} K^a_{bc} + g_{ma} ∇K^a_{bc}, with
    // ∇g given by the nonmetricity.
    for seed in 0..6 {
        let kind = [BundleKind::General, BundleKind::Statistical][seed as usize % 2];
        let b = random_bundle(kind, 3, seed).unwrap();
        for p in points(&b.domain, 4) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            let n = pc.dim;
            let g = &pc.jets.metric.g;
            let mut lowered = vec![Jet1::ZERO; n * n * n];
            for m in 0..n {
                for bb in 0..n {
                    for c in 0..n {
                        let mut acc = Jet1::ZERO;
                        for a in 0..n {
                            acc += g[m * n + a] * pc.k_jets[(a * n + bb) * n + c];
                        }
                        lowered[(m * n + bb) * n + c] = acc;
                    }
                }
            }
            let lower3 = [Variance::Lower; 3];
            let lhs = covariant_derivative_jets(&pc.gamma, n, &lower3, &lowered);
            let mut scale: f64 = 1e-12;
            for m in 0..n {
                for bb in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let mut rhs = 0.0;
                            for a in 0..n {
                                rhs += pc.cubic[(d * n + m) * n + a] * pc.k(a, bb, c)
                                    + pc.g[m * n + a] * pc.dk[((a * n + bb) * n + c) * n + d];
                            }
                            let l = lhs[((m * n + bb) * n + c) * n + d];
                            scale = scale.max(l.abs()).max(rhs.abs());
                            assert!((l - rhs).abs() <= 1e-12 * scale.max(1.0), "{l} vs {rhs}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn trace_free_statistical_bundles_trigger_the_simplified_forms() {
    let b = traceless_statistical(3, 2).unwrap();
    for p in points(&b.domain, 8) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        let ricci = ricci_decomposition_residuals(&pc);
        let stat = statistical_residuals(&pc);
        assert!(names(&ricci).contains(&"ricci_split_right_traceless"));
        assert!(names(&stat).contains(&"left_traceless_ricci_symmetry"));
        for nr in ricci.iter().chain(&stat) {
            assert!(
                nr.residual.relative() <= 1e-9,
                "{}: {:e}",
                nr.name,
                nr.residual.relative()
            );
        }
        assert!(pc.ric.tensor.iter().any(|x| x.abs() > 1e-3));
    }
}

#[test]
fn generic_statistical_bundles_do_not_trigger_trace_free_forms() {
    let b = random_bundle(BundleKind::Statistical, 3, 1).unwrap();
    let p = points(&b.domain, 1).remove(0);
    let pc = PointCurvature::at(&b, &p).unwrap();
    assert!(!names(&ricci_decomposition_residuals(&pc)).contains(&"ricci_split_right_traceless"));
    assert!(!names(&statistical_residuals(&pc)).contains(&"left_traceless_ricci_symmetry"));
    for nr in statistical_residuals(&pc) {
        assert!(nr.residual.relative() <= 1e-9, "{}", nr.name);
    }
}

#[test]
fn constant_cubic_on_flat_metric_is_conjugate_symmetric() {
    for seed in 0..3 {
        let b = flat_constant_cubic(3, seed).unwrap();
        for p in points(&b.domain, 4) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            assert!(pc.r.max_abs() > 1e-3, "curvature should be nontrivial");
            let ricci = ricci_decomposition_residuals(&pc);
            assert!(names(&ricci).contains(&"ricci_split_right_traceless_divergence_free"));
            let universal = universal_residuals(&pc);
            assert!(names(&universal).contains(&"conjugate_symmetric_first_pair_antisymmetry"));
            for nr in ricci.iter().chain(&universal) {
                assert!(nr.residual.relative() <= 1e-9, "{}", nr.name);
            }
        }
    }
}

#[test]
fn alpha_curvature_endpoints_and_midpoint() {
    let b = random_bundle(BundleKind::Statistical, 3, 5).unwrap();
    for p in points(&b.domain, 5) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        assert_eq!(alpha_riemann_direct(&pc, 1.0).data(), pc.r.data());
        assert_eq!(alpha_riemann_direct(&pc, -1.0).data(), pc.r_star.data());
        assert_eq!(alpha_riemann_blend(&pc, 1.0).data(), pc.r.data());
        assert_eq!(alpha_riemann_blend(&pc, -1.0).data(), pc.r_star.data());
        // α = 0 is the average connection.
        let mid = alpha_riemann_direct(&pc, 0.0);
        let scale = pc.r.max_abs().max(pc.r_star.max_abs());
        for (x, y) in mid.data().iter().zip(pc.r_avg.data()) {
            assert!((x - y).abs() <= 1e-12 * scale);
        }
        assert!(alpha_riemann_residual(&pc, 0.0).relative() <= 1e-9);
    }
}

#[test]
fn alpha_routes_agree_on_gaussian_sweep() {
    let b = gaussian_family().unwrap();
    for p in points(&b.domain, 10) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        for step in 0..=8 {
            let alpha = -1.0 + 0.25 * step as f64;
            let r = alpha_riemann_residual(&pc, alpha).relative();
            let q = alpha_ricci_residual(&pc, alpha).relative();
            assert!(r <= 1e-9 && q <= 1e-9, "α {alpha}: {r:e} {q:e}");
        }
    }
}

#[test]
fn alpha_ricci_routes_agree_on_random_bundles() {
    for kind in [
        BundleKind::Statistical,
        BundleKind::QuasiStatistical,
        BundleKind::General,
    ] {
        let b = random_bundle(kind, 3, 11).unwrap();
        for p in points(&b.domain, 5) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            for alpha in [-0.7, 0.3, 2.0] {
                let d = alpha_ricci_direct(&pc, alpha);
                let bl = alpha_ricci_blend(&pc, alpha);
                let scale = d.tensor.iter().fold(1.0_f64, |a, x| a.max(x.abs()));
                for (x, y) in d.tensor.iter().zip(&bl.tensor) {
                    assert!((x - y).abs() <= 1e-9 * scale, "{kind} α {alpha}");
                }
            }
        }
    }
}

#[test]
fn quadratic_ricci_vanishes_without_difference_tensor() {
    let b = sphere(1.0).unwrap();
    let p = points(&b.domain, 1).remove(0);
    let pc = PointCurvature::at(&b, &p).unwrap();
    assert!(quadratic_ricci(&pc).iter().all(|x| *x == 0.0));
    let d = alpha_ricci_blend(&pc, 0.4);
    for (x, y) in d.tensor.iter().zip(&pc.ric.tensor) {
        assert!((x - y).abs() <= 1e-15);
    }
}
