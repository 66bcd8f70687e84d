use chart_core::{
    halton_points, ChartField, ChartPoint, Domain, TensorComponents, ToleranceClass, Variance,
    DEFAULT_MARGIN,
};
use connections::BundleKind;
use curvature::{contract, quadratic_term, PointCurvature};
use einstein::{
    alpha_einstein, alpha_einstein_divergence, alpha_einstein_residual, effective_stress_energy,
    einstein_divergence_quasi, einstein_divergence_statistical, einstein_from_ricci, einstein_of,
    einstein_tensor, einstein_trace_residual, h_routes_residual, h_tensor_of, stress_energy_split,
    EinsteinError, EinsteinSource,
};
use manifold_zoo::{euclidean, flat_constant_cubic, gaussian_family, random_bundle, sphere};

const H: f64 = 1e-4;
const DIFF: ToleranceClass = ToleranceClass::Differential;
const ALG: ToleranceClass = ToleranceClass::Algebraic;

fn points(domain: &Domain, count: usize) -> Vec<ChartPoint> {
    halton_points(domain, count, 1, DEFAULT_MARGIN)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

#[test]
fn flat_space_has_zero_einstein_tensor_and_divergence() {
    let b = euclidean(3).unwrap();
    for p in points(&b.domain, 5) {
        let g = einstein_tensor(&b, EinsteinSource::Nabla, &p).unwrap();
        assert!(max_abs(&g.tensor) <= 1e-12);
        let report = einstein_divergence_statistical(&b, &p, H).unwrap();
        for (_, e) in report.entries() {
            assert!(max_abs(&e.lhs) <= 1e-12 && max_abs(&e.rhs) <= 1e-12);
        }
    }
}

#[test]
fn two_sphere_einstein_tensor_vanishes() {
    let b = sphere(1.0).unwrap();
    for p in points(&b.domain, 10) {
        let g = einstein_tensor(&b, EinsteinSource::Nabla, &p).unwrap();
        assert!(max_abs(&g.tensor) <= 5e-5);
    }
}

#[test]
fn einstein_tensor_is_symmetric_with_the_expected_trace() {
    for kind in [
        BundleKind::General,
        BundleKind::Statistical,
        BundleKind::QuasiStatistical,
    ] {
        let b = random_bundle(kind, 3, 2).unwrap();
        for p in points(&b.domain, 5) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            for (source, ric) in [
                (EinsteinSource::Nabla, &pc.ric),
                (EinsteinSource::NablaStar, &pc.ric_star),
            ] {
                let g = einstein_of(&pc, source);
                for i in 0..3 {
                    for j in 0..3 {
                        assert_eq!(g.get(i, j).to_bits(), g.get(j, i).to_bits());
                    }
                }
                let r = einstein_trace_residual(&g, ric, &pc.g_inv);
                assert!(r.relative() <= 1e-12, "{kind}: {:e}", r.relative());
            }
        }
    }
}

#[test]
fn einstein_sum_matches_the_contracted_sum_split() {
    // R_mi + R*_mi = 2 R⁽⁰⁾_mi + ½ Q_mi carries over to the Einstein tensors.
    let b = random_bundle(BundleKind::Statistical, 3, 8).unwrap();
    for p in points(&b.domain, 5) {
        let pc = PointCurvature::at(&b, &p).unwrap();
        let n = pc.dim;
        let g = einstein_of(&pc, EinsteinSource::Nabla).tensor;
        let gs = einstein_of(&pc, EinsteinSource::NablaStar).tensor;
        let g0 = einstein_from_ricci(&pc.ric_avg, &pc.g);
        let q = contract(&quadratic_term(&pc.k, n), n);
        let q_trace: f64 = q.iter().zip(&pc.g_inv).map(|(a, b)| a * b).sum();
        for i in 0..n {
            for j in 0..n {
                let q_sym = 0.5 * (q[i * n + j] + q[j * n + i]);
                let extra = 0.5 * (q_sym - 0.5 * pc.g[i * n + j] * q_trace);
                let lhs = g[i * n + j] + gs[i * n + j];
                let rhs = 2.0 * g0[i * n + j] + extra;
                assert!((lhs - rhs).abs() <= 1e-9 * max_abs(&g).max(1.0));
            }
        }
    }
}

#[test]
fn h_tensor_routes_agree_and_vanish_without_k() {
    for kind in [
        BundleKind::Statistical,
        BundleKind::QuasiStatistical,
        BundleKind::General,
    ] {
        let b = random_bundle(kind, 3, 5).unwrap();
        for p in points(&b.domain, 5) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            let r = h_routes_residual(&pc);
            assert!(r.passes(ALG), "{kind}: {:e}", r.relative());
            assert!(max_abs(&h_tensor_of(&pc)) > 1e-3);
        }
    }
    let s = sphere(1.0).unwrap();
    let pc = PointCurvature::at(&s, &points(&s.domain, 1)[0]).unwrap();
    assert!(h_tensor_of(&pc).iter().all(|x| *x == 0.0));
}

#[test]
fn alpha_einstein_endpoints_are_exact() {
    let b = random_bundle(BundleKind::Statistical, 3, 1).unwrap();
    for p in points(&b.domain, 3) {
        let g = einstein_tensor(&b, EinsteinSource::Nabla, &p).unwrap();
        let gs = einstein_tensor(&b, EinsteinSource::NablaStar, &p).unwrap();
        assert_eq!(alpha_einstein(&b, 1.0, &p).unwrap().tensor, g.tensor);
        assert_eq!(alpha_einstein(&b, -1.0, &p).unwrap().tensor, gs.tensor);
    }
}

#[test]
fn alpha_einstein_routes_agree() {
    let gauss = gaussian_family().unwrap();
    for p in points(&gauss.domain, 10) {
        let pc = PointCurvature::at(&gauss, &p).unwrap();
        for step in 0..9 {
            let alpha = -1.0 + 0.25 * step as f64;
            let r = alpha_einstein_residual(&pc, alpha);
            assert!(r.passes(ALG), "α {alpha}: {:e}", r.relative());
        }
    }
    for kind in [BundleKind::Statistical, BundleKind::QuasiStatistical] {
        let b = random_bundle(kind, 3, 4).unwrap();
        for p in points(&b.domain, 5) {
            let pc = PointCurvature::at(&b, &p).unwrap();
            assert!(alpha_einstein_residual(&pc, 0.0).passes(ALG));
        }
    }
}

#[test]
fn sphere_divergences_vanish() {
    let b = sphere(1.0).unwrap();
    for p in points(&b.domain, 10) {
        let report = einstein_divergence_statistical(&b, &p, H).unwrap();
        assert!(max_abs(&report.nabla_of_g.lhs) <= 5e-5);
        for (name, e) in report.entries() {
            assert!(
                e.residual.passes(DIFF),
                "{name}: {:e}",
                e.residual.relative()
            );
        }
    }
}

#[test]
fn statistical_divergences_with_second_order_decay() {
    for seed in 0..2 {
        let b = random_bundle(BundleKind::Statistical, 3, seed).unwrap();
        for p in points(&b.domain, 10) {
            let report = einstein_divergence_statistical(&b, &p, H).unwrap();
            for (name, e) in report.entries() {
                assert!(
                    e.residual.passes(DIFF),
                    "{name}: {:e}",
                    e.residual.relative()
                );
            }
        }
        let p = points(&b.domain, 1).remove(0);
        let coarse = einstein_divergence_statistical(&b, &p, 1e-2).unwrap();
        let fine = einstein_divergence_statistical(&b, &p, 5e-3).unwrap();
        for ((name, c), (_, f)) in coarse.entries().iter().zip(fine.entries().iter()) {
            let ratio = c.residual.abs / f.residual.abs;
            assert!((3.5..=4.5).contains(&ratio), "{name}: ratio {ratio}");
        }
    }
}

#[test]
fn quasi_divergences_exercise_the_torsion_terms() {
    for seed in 0..2 {
        let b = random_bundle(BundleKind::QuasiStatistical, 3, seed).unwrap();
        let pts = points(&b.domain, 10);
        let mut active = 0;
        for p in &pts {
            let report = einstein_divergence_quasi(&b, p, H).unwrap();
            for (name, e) in report.entries() {
                assert!(
                    e.residual.passes(DIFF),
                    "{name}: {:e}",
                    e.residual.relative()
                );
            }
            if max_abs(&report.torsion_term) >= 1e-3 {
                active += 1;
            }
        }
        assert!(
            2 * active >= pts.len(),
            "torsion terms active at {active} points"
        );
    }
}

#[test]
fn quasi_report_reduces_to_statistical_without_torsion() {
    let b = random_bundle(BundleKind::Statistical, 3, 3).unwrap();
    for p in points(&b.domain, 3) {
        let s = einstein_divergence_statistical(&b, &p, H).unwrap();
        let q = einstein_divergence_quasi(&b, &p, H).unwrap();
        assert!(max_abs(&q.torsion_term) <= 1e-12);
        for ((_, a), (_, c)) in s.entries().iter().zip(q.entries().iter()) {
            for (x, y) in a.rhs.iter().zip(&c.rhs) {
                assert!((x - y).abs() <= 1e-12 * max_abs(&a.rhs).max(1.0));
            }
        }
    }
}

#[test]
fn divergence_reports_check_the_bundle_kind() {
    let quasi = random_bundle(BundleKind::QuasiStatistical, 3, 0).unwrap();
    let general = random_bundle(BundleKind::General, 3, 0).unwrap();
    let p = points(&quasi.domain, 1).remove(0);
    assert!(matches!(
        einstein_divergence_statistical(&quasi, &p, H),
        Err(EinsteinError::KindMismatch { .. })
    ));
    assert!(matches!(
        einstein_divergence_quasi(&general, &p, H),
        Err(EinsteinError::KindMismatch { .. })
    ));
}

#[test]
fn ricci_conjugate_symmetric_bundles_share_mixed_divergences() {
    let b = flat_constant_cubic(3, 1).unwrap();
    for p in points(&b.domain, 4) {
        let r = einstein_divergence_statistical(&b, &p, H).unwrap();
        for (x, y) in r.star_of_g.lhs.iter().zip(&r.star_of_g_star.lhs) {
            assert!((x - y).abs() <= 1e-9);
        }
        for (x, y) in r.nabla_of_g_star.lhs.iter().zip(&r.nabla_of_g.lhs) {
            assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn alpha_divergence_expansion_weights_the_h_divergences() {
    let gauss = gaussian_family().unwrap();
    for p in points(&gauss.domain, 4) {
        for step in 0..9 {
            let alpha = -1.0 + 0.25 * step as f64;
            let d = alpha_einstein_divergence(&gauss, alpha, &p, H).unwrap();
            assert!(
                d.residual.passes(DIFF),
                "α {alpha}: {:e}",
                d.residual.relative()
            );
        }
    }
    let mut worst_unweighted: f64 = 0.0;
    for kind in [BundleKind::Statistical, BundleKind::QuasiStatistical] {
        let b = random_bundle(kind, 3, 2).unwrap();
        for p in points(&b.domain, 3) {
            for alpha in [-1.0, -0.3, 0.0, 0.5, 1.0] {
                let d = alpha_einstein_divergence(&b, alpha, &p, H).unwrap();
                assert!(
                    d.residual.passes(DIFF),
                    "{kind} α {alpha}: {:e}",
                    d.residual.relative()
                );
                worst_unweighted = worst_unweighted.max(d.unweighted_h_residual.relative());
            }
        }
    }
    // The unweighted H terms double-count ∇H: they fail well above the
    // differential tolerance wherever H has a nonzero divergence.
    assert!(worst_unweighted > 1e-3, "{worst_unweighted:e}");
}

fn matter_field(dim: usize, domain: Domain) -> ChartField {
    ChartField::new(dim, vec![Variance::Lower; 2], domain, move |p| {
        let x = p.coords();
        let mut t = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                t[i * dim + j] = (x[i] * x[j]).cos() + 0.1 * (i + j) as f64;
            }
        }
        TensorComponents::from_vec(dim, vec![Variance::Lower; 2], t)
    })
}

#[test]
fn effective_stress_energy_round_trips() {
    let b = random_bundle(BundleKind::Statistical, 3, 6).unwrap();
    let matter = matter_field(3, b.domain.clone());
    for p in points(&b.domain, 5) {
        let split = effective_stress_energy(&b, 0.5, &matter, &p, 1.0).unwrap();
        assert!(
            split.round_trip.passes(ALG),
            "{:e}",
            split.round_trip.relative()
        );
        assert!(split.rearrangement.passes(ALG));
        // The literal coefficients do not reproduce the field equation.
        assert!(split.literal_round_trip.relative() > 1e-6);
        let kappa = effective_stress_energy(&b, -0.4, &matter, &p, 2.5).unwrap();
        assert!(kappa.round_trip.passes(ALG) && kappa.rearrangement.passes(ALG));
    }
}

#[test]
fn effective_stress_energy_limits() {
    let b = random_bundle(BundleKind::Statistical, 3, 6).unwrap();
    let matter = matter_field(3, b.domain.clone());
    let p = points(&b.domain, 1).remove(0);
    let split = effective_stress_energy(&b, 1.0, &matter, &p, 1.0).unwrap();
    assert_eq!(split.effective, matter.eval(&p).unwrap().data());
    assert!(matches!(
        effective_stress_energy(&b, -1.0, &matter, &p, 1.0),
        Err(EinsteinError::AlphaSingular)
    ));
    let flat = euclidean(3).unwrap();
    let pc = PointCurvature::at(&flat, &points(&flat.domain, 1)[0]).unwrap();
    let zero = stress_energy_split(&pc, 0.3, &[0.0; 9], 1.0).unwrap();
    assert!(zero.effective.iter().all(|x| *x == 0.0));
}
