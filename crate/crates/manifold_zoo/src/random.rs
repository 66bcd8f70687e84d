//! Seeded random bundles.
//!
//! Metrics are `g = A(x) A(x)ᵀ + 2 I` with `A` affine in `x` and entries in
//! `[−0.3, 0.3]`; cubic tensors and raw connection coefficients are dense
//! quadratic polynomials with coefficients in `[−0.5, 0.5]`. The domain is
//! `[−1, 1]^dim`.

use chart_core::{
    halton_points, invert_with_det, ChartPoint, Domain, Jet1, Jet2, SmoothField, DEFAULT_MARGIN,
};
use connections::{
    recovered_pair, statistical_pair_from_cubic, torsion, BundleKind, ConnJet, ConnectionField,
    CubicMode, GeometryBundle, MetricJet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builtin::{cubic_field, metric_field};
use crate::error::ZooError;
use crate::polynomial::Polynomial;

pub const MAX_ATTEMPTS: usize = 10;
const METRIC_RANGE: f64 = 0.3;
const POLY_RANGE: f64 = 0.5;

/// Everything drawn from the random stream for one bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub kind: BundleKind,
    pub dim: usize,
    pub seed: u64,
    pub attempt: usize,
    /// `A₀, A₁, …, A_n`, each row-major `n × n`.
    pub metric_affine: Vec<Vec<f64>>,
    /// Raw cubic components in `[k][i][j]` layout before symmetrization.
    pub cubic: Vec<Polynomial>,
    /// Raw connection coefficients (general kind only).
    pub connection: Vec<Polynomial>,
    /// Raw contorsion components (pre-statistical kind only).
    pub contorsion: Vec<Polynomial>,
}

fn draw_params(
    kind: BundleKind,
    dim: usize,
    seed: u64,
    attempt: usize,
    rng: &mut ChaCha8Rng,
) -> RandomParams {
    let n = dim;
    let metric_affine = (0..=n)
        .map(|_| {
            (0..n * n)
                .map(|_| rng.gen_range(-METRIC_RANGE..=METRIC_RANGE))
                .collect()
        })
        .collect();
    let poly = |rng: &mut ChaCha8Rng| Polynomial::random(n, 2, POLY_RANGE, rng);
    let cubic = (0..n * n * n).map(|_| poly(rng)).collect();
    let connection = if kind == BundleKind::General {
        (0..n * n * n).map(|_| poly(rng)).collect()
    } else {
        Vec::new()
    };
    let contorsion = if kind == BundleKind::PreStatistical {
        (0..n * n * n).map(|_| poly(rng)).collect()
    } else {
        Vec::new()
    };
    RandomParams {
        kind,
        dim,
        seed,
        attempt,
        metric_affine,
        cubic,
        connection,
        contorsion,
    }
}

/// Metric `A(x) A(x)ᵀ + 2 I` from affine matrix coefficients.
pub fn affine_gram_metric(domain: Domain, affine: Vec<Vec<f64>>) -> SmoothField {
    let n = domain.dim();
    metric_field(domain, move |x| {
        let mut a = vec![Jet2::ZERO; n * n];
        for (r, e) in a.iter_mut().enumerate() {
            *e = Jet2::constant(affine[0][r]);
            for (axis, xa) in x.iter().enumerate() {
                *e += xa.scale(affine[axis + 1][r]);
            }
        }
        let mut g = vec![Jet2::ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                let mut s = Jet2::constant(if i == j { 2.0 } else { 0.0 });
                for k in 0..n {
                    s += a[i * n + k] * a[j * n + k];
                }
                g[i * n + j] = s;
                g[j * n + i] = s;
            }
        }
        g
    })
}

/// Cubic field from raw polynomials with the requested symmetrization.
pub fn symmetrized_cubic(domain: Domain, raw: Vec<Polynomial>, mode: CubicMode) -> SmoothField {
    let n = domain.dim();
    cubic_field(domain, move |x| {
        let v: Vec<Jet2> = raw.iter().map(|p| p.eval(x)).collect();
        let at = |a: usize, b: usize, c: usize| v[(a * n + b) * n + c];
        let mut out = vec![Jet2::ZERO; n * n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    out[(k * n + i) * n + j] = match mode {
                        CubicMode::SymmetricLastTwo => (at(k, i, j) + at(k, j, i)).scale(0.5),
                        CubicMode::TotallySymmetric => (at(k, i, j)
                            + at(k, j, i)
                            + at(i, k, j)
                            + at(i, j, k)
                            + at(j, k, i)
                            + at(j, i, k))
                        .scale(1.0 / 6.0),
                    };
                }
            }
        }
        out
    })
}

fn build(params: &RandomParams) -> Result<GeometryBundle, ZooError> {
    let n = params.dim;
    let domain = Domain::cube(n, -1.0, 1.0)?;
    let g = affine_gram_metric(domain.clone(), params.metric_affine.clone());
    let name = format!(
        "random_{}(dim={}, seed={})",
        params.kind.label(),
        n,
        params.seed
    );
    let bundle = match params.kind {
        BundleKind::Statistical => {
            let c = symmetrized_cubic(domain, params.cubic.clone(), CubicMode::TotallySymmetric);
            statistical_pair_from_cubic(&g, &c, CubicMode::TotallySymmetric, &name)?
        }
        BundleKind::QuasiStatistical => {
            let c = symmetrized_cubic(domain, params.cubic.clone(), CubicMode::SymmetricLastTwo);
            statistical_pair_from_cubic(&g, &c, CubicMode::SymmetricLastTwo, &name)?
        }
        BundleKind::General => {
            let raw = params.connection.clone();
            let field = SmoothField::new(
                n,
                vec![
                    chart_core::Variance::Upper,
                    chart_core::Variance::Lower,
                    chart_core::Variance::Lower,
                ],
                domain,
                move |x| raw.iter().map(|p| p.eval(x)).collect(),
            );
            let b = GeometryBundle::from_connection(
                &name,
                g,
                ConnectionField::from_smooth(field),
                BundleKind::General,
            );
            b.validate(20)?;
            b
        }
        BundleKind::PreStatistical => {
            let c = symmetrized_cubic(
                domain.clone(),
                params.cubic.clone(),
                CubicMode::TotallySymmetric,
            );
            let (stat, _) = recovered_pair(&g, &c);
            let raw = params.contorsion.clone();
            let metric = g.clone();
            let nabla = ConnectionField::new(n, domain, move |p| {
                let m = MetricJet::at(&metric, p)?;
                let x = Jet2::seed(p.coords());
                let v: Vec<Jet1> = raw.iter().map(|q| q.eval(&x).to_jet1()).collect();
                // B[z][i][j] antisymmetric in (z, i) keeps the nonmetricity unchanged.
                let b =
                    |z: usize, i: usize, j: usize| v[(z * n + i) * n + j] - v[(i * n + z) * n + j];
                let mut out = stat.jet(p)?;
                for mm in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            let mut acc = Jet1::ZERO;
                            for z in 0..n {
                                acc += m.g_inv[mm * n + z] * b(z, i, j);
                            }
                            let o = out.idx(mm, i, j);
                            out.data[o] += acc;
                        }
                    }
                }
                Ok(out)
            });
            let b = GeometryBundle::from_connection(&name, g, nabla, BundleKind::PreStatistical);
            b.validate(20)?;
            b
        }
    };
    if params.kind == BundleKind::QuasiStatistical {
        let max_dual_torsion = halton_points(&bundle.domain, 20, 0, DEFAULT_MARGIN)
            .iter()
            .map(|p| torsion(&bundle.nabla_star, p).map(|t| t.max_abs()))
            .collect::<Result<Vec<f64>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        if max_dual_torsion < 1e-3 {
            return Err(ZooError::validation(
                "dual torsion present",
                format!("max |T*| = {max_dual_torsion:e}"),
            ));
        }
    }
    Ok(bundle)
}

/// Parameters of the first valid attempt for `(kind, dim, seed)`.
pub fn random_params(kind: BundleKind, dim: usize, seed: u64) -> Result<RandomParams, ZooError> {
    Ok(random_bundle_with_params(kind, dim, seed)?.1)
}

/// Deterministic random bundle of the requested kind.
pub fn random_bundle(kind: BundleKind, dim: usize, seed: u64) -> Result<GeometryBundle, ZooError> {
    Ok(random_bundle_with_params(kind, dim, seed)?.0)
}

pub fn random_bundle_with_params(
    kind: BundleKind,
    dim: usize,
    seed: u64,
) -> Result<(GeometryBundle, RandomParams), ZooError> {
    if !(2..=4).contains(&dim) {
        return Err(chart_core::ChartError::UnsupportedDimension(dim).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let params = draw_params(kind, dim, seed, attempt, &mut rng);
        match build(&params) {
            Ok(b) => return Ok((b, params)),
            Err(e) => last = e.to_string(),
        }
    }
    Err(ZooError::GenerationFailure {
        kind: kind.label().to_string(),
        attempts: MAX_ATTEMPTS,
        last,
    })
}

/// Removes the `g`-trace of a totally symmetric cubic tensor:
/// `C' = C − (g ⊙ v)/(n + 2)` with `v_i = g^{pq} C_ipq`, so `g^{pq} C'_ipq = 0`.
pub fn traceless_cubic(metric: SmoothField, cubic: SmoothField) -> SmoothField {
    let n = metric.dim();
    let domain = metric.domain().clone();
    cubic_field(domain, move |x| {
        let g = metric.eval_jets(x);
        let c = cubic.eval_jets(x);
        let (gi, _) = invert_with_det(&g, n).expect("metric invertible on its domain");
        let v: Vec<Jet2> = (0..n)
            .map(|i| {
                let mut s = Jet2::ZERO;
                for p in 0..n {
                    for q in 0..n {
                        s += gi[p * n + q] * c[(i * n + p) * n + q];
                    }
                }
                s
            })
            .collect();
        let inv = 1.0 / (n as f64 + 2.0);
        let mut out = c.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let corr = g[i * n + j] * v[k] + g[i * n + k] * v[j] + g[j * n + k] * v[i];
                    out[(i * n + j) * n + k] -= corr.scale(inv);
                }
            }
        }
        out
    })
}

/// Statistical bundle on a random metric whose cubic tensor is `g`-trace
/// free, so that `Tr₂(K) = 0` and `∇` parallelizes the metric volume.
pub fn traceless_statistical(dim: usize, seed: u64) -> Result<GeometryBundle, ZooError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7ace_1e55);
    let domain = Domain::cube(dim, -1.0, 1.0)?;
    let affine = (0..=dim)
        .map(|_| {
            (0..dim * dim)
                .map(|_| rng.gen_range(-METRIC_RANGE..=METRIC_RANGE))
                .collect()
        })
        .collect();
    let g = affine_gram_metric(domain.clone(), affine);
    let raw = (0..dim * dim * dim)
        .map(|_| Polynomial::random(dim, 2, POLY_RANGE, &mut rng))
        .collect();
    let c = traceless_cubic(
        g.clone(),
        symmetrized_cubic(domain, raw, CubicMode::TotallySymmetric),
    );
    Ok(statistical_pair_from_cubic(
        &g,
        &c,
        CubicMode::TotallySymmetric,
        &format!("traceless_statistical(seed={seed})"),
    )?)
}

/// Statistical bundle on the identity metric with a trace-free cubic
/// polynomial, so both `Tr₁(Γ)` and `Tr₁(Γ*)` vanish identically.
pub fn flat_traceless_statistical(dim: usize, seed: u64) -> Result<GeometryBundle, ZooError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf1a7);
    let domain = Domain::cube(dim, -1.0, 1.0)?;
    let g = metric_field(domain.clone(), move |_| {
        crate::builtin::diagonal(vec![Jet2::constant(1.0); dim])
    });
    let raw = (0..dim * dim * dim)
        .map(|_| Polynomial::random(dim, 2, POLY_RANGE, &mut rng))
        .collect();
    let c = traceless_cubic(
        g.clone(),
        symmetrized_cubic(domain, raw, CubicMode::TotallySymmetric),
    );
    Ok(statistical_pair_from_cubic(
        &g,
        &c,
        CubicMode::TotallySymmetric,
        &format!("flat_traceless(seed={seed})"),
    )?)
}

/// Identity metric with a constant, trace-free, totally symmetric cubic
/// tensor. Both `Tr₁(K)` and the average-connection divergence of `K`
/// vanish identically.
pub fn flat_constant_cubic(dim: usize, seed: u64) -> Result<GeometryBundle, ZooError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc0de);
    let domain = Domain::cube(dim, -1.0, 1.0)?;
    let g = metric_field(domain.clone(), move |_| {
        crate::builtin::diagonal(vec![Jet2::constant(1.0); dim])
    });
    let raw: Vec<Polynomial> = (0..dim * dim * dim)
        .map(|_| Polynomial::constant(dim, rng.gen_range(-POLY_RANGE..=POLY_RANGE)))
        .collect();
    let c = traceless_cubic(
        g.clone(),
        symmetrized_cubic(domain, raw, CubicMode::TotallySymmetric),
    );
    Ok(statistical_pair_from_cubic(
        &g,
        &c,
        CubicMode::TotallySymmetric,
        &format!("flat_constant_cubic(seed={seed})"),
    )?)
}

/// A general connection made equiaffine for a random positive density
/// `λ = exp(p(x))`: the raw coefficients are shifted by `δ^k_i w_j` with
/// `w = (∂ log λ − Tr₂ Γ)/n`.
pub fn equiaffine_case(dim: usize, seed: u64) -> Result<(GeometryBundle, SmoothField), ZooError> {
    let (base, params) = random_bundle_with_params(BundleKind::General, dim, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a3bda);
    let domain = base.domain.clone();
    let log_poly = Polynomial::random(dim, 2, POLY_RANGE, &mut rng);
    let lp = log_poly.clone();
    let lambda = SmoothField::new(dim, Vec::new(), domain.clone(), move |x| {
        vec![lp.eval(x).exp()]
    });
    let raw = params.connection.clone();
    let nabla = ConnectionField::new(dim, domain, move |p: &ChartPoint| {
        let x = Jet2::seed(p.coords());
        let log_l = log_poly.eval(&x);
        let mut gamma = ConnJet {
            dim,
            data: raw.iter().map(|q| q.eval(&x).to_jet1()).collect(),
        };
        for j in 0..dim {
            let mut tr = Jet1::ZERO;
            for k in 0..dim {
                tr += gamma.at(k, k, j);
            }
            let w = (log_l.partial(j) - tr).scale(1.0 / dim as f64);
            for k in 0..dim {
                let o = gamma.idx(k, k, j);
                gamma.data[o] += w;
            }
        }
        Ok(gamma)
    });
    let bundle = GeometryBundle::from_connection(
        &format!("equiaffine(dim={dim}, seed={seed})"),
        base.metric,
        nabla,
        BundleKind::General,
    );
    Ok((bundle, lambda))
}

/// The pair `∇⁰ ∓ ½ C♯` built from a cubic symmetric only in its last two
/// slots, with no symmetrization. Both connections carry torsion
/// (`T* = −T`) while their average is still Levi-Civita.
pub fn verbatim_last_two_pair(dim: usize, seed: u64) -> Result<GeometryBundle, ZooError> {
    let params = random_params(BundleKind::QuasiStatistical, dim, seed)?;
    let domain = Domain::cube(dim, -1.0, 1.0)?;
    let g = affine_gram_metric(domain.clone(), params.metric_affine);
    let c = symmetrized_cubic(domain.clone(), params.cubic, CubicMode::SymmetricLastTwo);
    let (nabla, nabla_star) = recovered_pair(&g, &c);
    let bundle = GeometryBundle {
        name: format!("verbatim_last_two(dim={dim}, seed={seed})"),
        metric: g,
        nabla,
        nabla_star,
        domain,
        kind: BundleKind::General,
    };
    bundle.validate(20)?;
    Ok(bundle)
}

/// One bundle from each structural class for a seed: statistical,
/// quasi-statistical, its swap, pre-statistical, general, and the verbatim
/// last-two pair.
pub fn structural_family(dim: usize, seed: u64) -> Result<Vec<GeometryBundle>, ZooError> {
    let quasi = random_bundle(BundleKind::QuasiStatistical, dim, seed)?;
    Ok(vec![
        random_bundle(BundleKind::Statistical, dim, seed)?,
        quasi.swapped(),
        quasi,
        random_bundle(BundleKind::PreStatistical, dim, seed)?,
        random_bundle(BundleKind::General, dim, seed)?,
        verbatim_last_two_pair(dim, seed)?,
    ])
}
