//! Brute-force oracle for the curvature splits: every side is transcribed
//! directly as nested sums over coordinate indices, with no shared helpers
//! from the crate under test beyond the jets of the bundle.

use chart_core::{halton_points, ChartPoint, Jet1, DEFAULT_MARGIN};
use connections::{BundleKind, ConnJet, GeometryBundle};
use curvature::{
    decomposition_residuals, ricci_decomposition_residuals, riemann_of, specialized_residuals,
    PointCurvature,
};
use manifold_zoo::random_bundle;

struct Naive {
    n: usize,
    r: Vec<f64>,
    rs: Vec<f64>,
    r0: Vec<f64>,
    k: Vec<f64>,
    t: Vec<f64>,
    t0: Vec<f64>,
    dk: Vec<f64>,
    dk0: Vec<f64>,
}

fn gamma_value(c: &ConnJet, k: usize, i: usize, j: usize) -> f64 {
    c.data[(k * c.dim + i) * c.dim + j].v
}

fn gamma_deriv(c: &ConnJet, k: usize, i: usize, j: usize, a: usize) -> f64 {
    c.data[(k * c.dim + i) * c.dim + j].d[a]
}

/// `R_i^j_{kl}` at `[i][j][k][l]`, straight from the coordinate formula.
fn naive_riemann(c: &ConnJet) -> Vec<f64> {
    let n = c.dim;
    let mut out = vec![0.0; n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = gamma_deriv(c, j, i, l, k) - gamma_deriv(c, j, i, k, l);
                    for h in 0..n {
                        v += gamma_value(c, h, i, l) * gamma_value(c, j, h, k);
                        v -= gamma_value(c, h, i, k) * gamma_value(c, j, h, l);
                    }
                    out[((i * n + j) * n + k) * n + l] = v;
                }
            }
        }
    }
    out
}

/// `K^k_{mi|j}` at `[k][m][i][j]` for connection `c`.
fn naive_dk(c: &ConnJet, kj: &[Jet1], n: usize) -> Vec<f64> {
    let kv = |a: usize, b: usize, d: usize| kj[(a * n + b) * n + d].v;
    let mut out = vec![0.0; n * n * n * n];
    for k in 0..n {
        for m in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = kj[(k * n + m) * n + i].d[j];
                    for h in 0..n {
                        v += gamma_value(c, k, h, j) * kv(h, m, i);
                        v -= gamma_value(c, h, m, j) * kv(k, h, i);
                        v -= gamma_value(c, h, i, j) * kv(k, m, h);
                    }
                    out[((k * n + m) * n + i) * n + j] = v;
                }
            }
        }
    }
    out
}

fn naive_torsion(c: &ConnJet) -> Vec<f64> {
    let n = c.dim;
    let mut out = vec![0.0; n * n * n];
    for i in 0..n {
        for k in 0..n {
            for l in 0..n {
                out[(i * n + k) * n + l] = gamma_value(c, i, l, k) - gamma_value(c, i, k, l);
            }
        }
    }
    out
}

fn naive(bundle: &GeometryBundle, p: &ChartPoint) -> Naive {
    let nabla = bundle.nabla.jet(p).unwrap();
    let star = bundle.nabla_star.jet(p).unwrap();
    let n = nabla.dim;
    let mut avg = nabla.clone();
    let kj: Vec<_> = nabla
        .data
        .iter()
        .zip(&star.data)
        .map(|(a, b)| *b - *a)
        .collect();
    for (m, (a, b)) in avg.data.iter_mut().zip(nabla.data.iter().zip(&star.data)) {
        *m = (*a + *b).scale(0.5);
    }
    Naive {
        n,
        r: naive_riemann(&nabla),
        rs: naive_riemann(&star),
        r0: naive_riemann(&avg),
        k: kj.iter().map(|j| j.v).collect(),
        t: naive_torsion(&nabla),
        t0: naive_torsion(&avg),
        dk: naive_dk(&nabla, &kj, n),
        dk0: naive_dk(&avg, &kj, n),
    }
}

/// Maximum relative defect of the seven splits at a point, in the
/// `R_m^k_{ji}` reading of the four-index arrays.
fn naive_split_defect(s: &Naive) -> f64 {
    let n = s.n;
    let i4 = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
    let kk = |a: usize, b: usize, c: usize| s.k[(a * n + b) * n + c];
    let mut worst: f64 = 0.0;
    for m in 0..n {
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let r = s.r[i4(m, k, j, i)];
                    let rs = s.rs[i4(m, k, j, i)];
                    let r0 = s.r0[i4(m, k, j, i)];
                    let d0 = s.dk0[i4(k, m, i, j)] - s.dk0[i4(k, m, j, i)];
                    let d = s.dk[i4(k, m, i, j)] - s.dk[i4(k, m, j, i)];
                    let mut quad = 0.0;
                    let mut tk = 0.0;
                    let mut t0k = 0.0;
                    for l in 0..n {
                        quad += kk(l, m, i) * kk(k, l, j) - kk(l, m, j) * kk(k, l, i);
                        tk += s.t[(l * n + j) * n + i] * kk(k, m, l);
                        t0k += s.t0[(l * n + j) * n + i] * kk(k, m, l);
                    }
                    let scale = [r, rs, r0, d0, d, quad, tk, t0k]
                        .iter()
                        .fold(1e-12_f64, |a, x| a.max(x.abs()));
                    let defects = [
                        r - (r0 - 0.5 * d0 + 0.25 * quad - 0.5 * t0k),
                        r - (r0 - 0.5 * d - 0.25 * quad - 0.5 * tk),
                        rs - (r0 + 0.5 * d0 + 0.25 * quad + 0.5 * t0k),
                        rs - (r0 + 0.5 * d + 0.75 * quad + 0.5 * tk),
                        (r - rs) - (-d0 - t0k),
                        (r - rs) - (-d - quad - tk),
                        (r + rs) - (2.0 * r0 + 0.5 * quad),
                    ];
                    for x in defects {
                        worst = worst.max(x.abs() / scale);
                    }
                }
            }
        }
    }
    worst
}

fn sample(bundle: &GeometryBundle, count: usize) -> Vec<ChartPoint> {
    halton_points(&bundle.domain, count, 1, DEFAULT_MARGIN)
}

#[test]
fn riemann_matches_naive_transcription() {
    for kind in [BundleKind::General, BundleKind::QuasiStatistical] {
        for seed in 0..4 {
            let b = random_bundle(kind, 3, seed).unwrap();
            for p in sample(&b, 5) {
                let jet = b.nabla.jet(&p).unwrap();
                let fast = riemann_of(&jet);
                let slow = naive_riemann(&jet);
                let scale = slow.iter().fold(1e-12_f64, |a, x| a.max(x.abs()));
                for (x, y) in fast.data().iter().zip(&slow) {
                    assert!((x - y).abs() <= 1e-13 * scale, "{x} vs {y}");
                }
            }
        }
    }
}

#[test]
fn oracle_confirms_splits_on_every_kind() {
    for kind in [
        BundleKind::General,
        BundleKind::PreStatistical,
        BundleKind::Statistical,
        BundleKind::QuasiStatistical,
    ] {
        for dim in [2, 3] {
            for seed in 0..3 {
                let b = random_bundle(kind, dim, seed).unwrap();
                for p in sample(&b, 6) {
                    let defect = naive_split_defect(&naive(&b, &p));
                    assert!(defect <= 1e-9, "{kind} dim {dim} seed {seed}: {defect:e}");
                }
            }
        }
    }
}

#[test]
fn evaluators_agree_with_oracle_verdicts() {
    for kind in [
        BundleKind::Statistical,
        BundleKind::QuasiStatistical,
        BundleKind::General,
    ] {
        for seed in 0..3 {
            let b = random_bundle(kind, 3, seed).unwrap();
            for p in sample(&b, 6) {
                assert!(naive_split_defect(&naive(&b, &p)) <= 1e-9);
                let pc = PointCurvature::at(&b, &p).unwrap();
                let all = decomposition_residuals(&pc)
                    .into_iter()
                    .chain(ricci_decomposition_residuals(&pc))
                    .chain(specialized_residuals(&pc, kind));
                for nr in all {
                    let rel = nr.residual.relative();
                    assert!(rel <= 1e-9, "{kind} seed {seed} {}: {rel:e}", nr.name);
                }
            }
        }
    }
}

#[test]
fn wrong_sign_in_a_split_is_detected() {
    // The oracle must be able to fail: flipping the quadratic coefficient
    // in the sum split gives an O(1) defect on a bundle with K ≠ 0.
    let b = random_bundle(BundleKind::Statistical, 3, 7).unwrap();
    let p = sample(&b, 1).remove(0);
    let s = naive(&b, &p);
    let n = s.n;
    let mut worst: f64 = 0.0;
    for m in 0..n {
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let x = ((m * n + k) * n + j) * n + i;
                    let mut quad = 0.0;
                    for l in 0..n {
                        let kk = |a: usize, b: usize, c: usize| s.k[(a * n + b) * n + c];
                        quad += kk(l, m, i) * kk(k, l, j) - kk(l, m, j) * kk(k, l, i);
                    }
                    worst = worst.max((s.r[x] + s.rs[x] - 2.0 * s.r0[x] + 0.5 * quad).abs());
                }
            }
        }
    }
    assert!(worst > 1e-3, "{worst}");
}
