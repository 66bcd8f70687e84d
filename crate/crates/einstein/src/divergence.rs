//! Divergences `∇^i G_ij = g^{ik} ∇_k G_ij` of Einstein tensors.
//!
//! Left sides differentiate the Einstein field itself by central
//! differences. Right sides are closed forms obtained from the contracted
//! Bianchi identity and curvature duality; the non-parallel metric enters
//! through the nonmetricity of the acting connection,
//! `∇_h g^{ls} = −g^{la} g^{sb} C_hab`.

use chart_core::{ChartError, ChartField, ChartPoint, Residual, TensorComponents, Variance};
use connections::{
    nonmetricity_jet, torsion_jet, values, BundleKind, ConnJet, GeometryBundle, MetricJet,
    PointJets,
};
use curvature::{
    blend_coefficients, covariant_derivative, curvature_term_scale, fd_partials,
    quadratic_ricci_of, ricci, riemann_of, RicciValue, RiemannValue,
};

use crate::error::EinsteinError;
use crate::h_tensor::h_tensor_from;
use crate::tensor::einstein_from_ricci;

const LOWER2: [Variance; 2] = [Variance::Lower, Variance::Lower];

/// Which connection of the pair is in play.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Nabla,
    Star,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Nabla => Side::Star,
            Side::Star => Side::Nabla,
        }
    }

    fn pick(self, jets: &PointJets) -> &ConnJet {
        match self {
            Side::Nabla => &jets.nabla,
            Side::Star => &jets.star,
        }
    }
}

/// Pointwise geometry used by the closed forms.
struct Local {
    n: usize,
    g_inv: Vec<f64>,
    gamma: [Vec<f64>; 2],
    r: [RiemannValue; 2],
    ric: [RicciValue; 2],
    cubic: [Vec<f64>; 2],
    torsion: [Vec<f64>; 2],
}

fn slot(side: Side) -> usize {
    match side {
        Side::Nabla => 0,
        Side::Star => 1,
    }
}

impl Local {
    fn new(jets: &PointJets) -> Self {
        let g_inv = jets.metric.g_inv_values();
        let r = [riemann_of(&jets.nabla), riemann_of(&jets.star)];
        let ric = [ricci(&r[0], &g_inv), ricci(&r[1], &g_inv)];
        Local {
            n: jets.dim(),
            gamma: [jets.nabla.values(), jets.star.values()],
            cubic: [
                values(&nonmetricity_jet(&jets.metric, &jets.nabla)),
                values(&nonmetricity_jet(&jets.metric, &jets.star)),
            ],
            torsion: [
                values(&torsion_jet(&jets.nabla)),
                values(&torsion_jet(&jets.star)),
            ],
            g_inv,
            r,
            ric,
        }
    }

    /// `∇_h g^{ls}` at `[(h n + l) n + s]` for the acting connection.
    fn inverse_metric_derivative(&self, side: Side) -> Vec<f64> {
        let n = self.n;
        let c = &self.cubic[slot(side)];
        let gi = &self.g_inv;
        let mut out = vec![0.0; n * n * n];
        for h in 0..n {
            for l in 0..n {
                for s in 0..n {
                    let mut acc = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            acc += gi[l * n + a] * gi[s * n + b] * c[(h * n + a) * n + b];
                        }
                    }
                    out[(h * n + l) * n + s] = -acc;
                }
            }
        }
        out
    }

    /// `∇^i g_ij = g^{ik} C_kij` for the acting connection.
    fn metric_divergence(&self, side: Side) -> Vec<f64> {
        let n = self.n;
        let c = &self.cubic[slot(side)];
        (0..n)
            .map(|j| {
                let mut acc = 0.0;
                for i in 0..n {
                    for k in 0..n {
                        acc += self.g_inv[i * n + k] * c[(k * n + i) * n + j];
                    }
                }
                acc
            })
            .collect()
    }
}

fn jets_at(bundle: &GeometryBundle, q: &ChartPoint) -> Result<PointJets, ChartError> {
    Ok(PointJets {
        metric: MetricJet::at(&bundle.metric, q)?,
        nabla: bundle.nabla.jet(q)?,
        star: bundle.nabla_star.jet(q)?,
    })
}

fn rank2_field<F>(bundle: &GeometryBundle, f: F) -> ChartField
where
    F: Fn(&PointJets) -> Vec<f64> + Send + Sync + 'static,
{
    let b = bundle.clone();
    let n = bundle.dim();
    ChartField::new(n, LOWER2.to_vec(), bundle.domain.clone(), move |q| {
        let jets = jets_at(&b, q)?;
        TensorComponents::from_vec(n, LOWER2.to_vec(), f(&jets))
    })
}

fn scalar_field<F>(bundle: &GeometryBundle, f: F) -> ChartField
where
    F: Fn(&PointJets) -> f64 + Send + Sync + 'static,
{
    let b = bundle.clone();
    ChartField::new(bundle.dim(), Vec::new(), bundle.domain.clone(), move |q| {
        Ok(TensorComponents::scalar(f(&jets_at(&b, q)?)))
    })
}

fn ricci_on(jets: &PointJets, conn: &ConnJet) -> RicciValue {
    ricci(&riemann_of(conn), &jets.metric.g_inv_values())
}

/// Einstein tensor of one side of the pair as a chart field.
pub fn einstein_field(bundle: &GeometryBundle, side: Side) -> ChartField {
    rank2_field(bundle, move |jets| {
        einstein_from_ricci(&ricci_on(jets, side.pick(jets)), &jets.metric.g_values())
    })
}

/// α-Einstein tensor as a chart field.
pub fn alpha_einstein_field(bundle: &GeometryBundle, alpha: f64) -> ChartField {
    rank2_field(bundle, move |jets| {
        einstein_from_ricci(&ricci_on(jets, &jets.alpha(alpha)), &jets.metric.g_values())
    })
}

/// The `H` tensor as a chart field.
pub fn h_field(bundle: &GeometryBundle) -> ChartField {
    rank2_field(bundle, |jets| {
        let k = values(&jets.difference().data);
        h_tensor_from(
            &k,
            &jets.metric.g_values(),
            &jets.metric.g_inv_values(),
            jets.dim(),
        )
    })
}

/// `g^{ik} ∇_k F_ij` for a rank-2 covariant field, with the connection
/// coefficients `gamma` and inverse metric taken at `p`.
pub fn fd_divergence(
    field: &ChartField,
    gamma: &[f64],
    g_inv: &[f64],
    p: &ChartPoint,
    step: f64,
) -> Result<Vec<f64>, ChartError> {
    let n = p.dim();
    let value = field.eval(p)?;
    let partials = fd_partials(field, p, step)?;
    let d = covariant_derivative(gamma, n, &LOWER2, value.data(), &partials);
    Ok((0..n)
        .map(|j| {
            let mut acc = 0.0;
            for i in 0..n {
                for k in 0..n {
                    acc += g_inv[i * n + k] * d[(i * n + j) * n + k];
                }
            }
            acc
        })
        .collect())
}

/// One divergence identity evaluated at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceEntry {
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub residual: Residual,
}

impl DivergenceEntry {
    fn new(lhs: Vec<f64>, rhs: Vec<f64>, pieces: &[&[f64]], constituents: &[f64]) -> Self {
        let mut residual = Residual::of_difference(&lhs, &rhs);
        for piece in pieces {
            residual.terms(piece);
        }
        // Einstein tensors cancel identically in two dimensions, so the
        // curvature entering them sets the scale as well.
        residual.terms(constituents);
        DivergenceEntry { lhs, rhs, residual }
    }
}

/// The four Einstein divergences of a dual pair.
#[derive(Clone, Debug, PartialEq)]
pub struct DivergenceReport {
    /// `∇^i G_ij`.
    pub nabla_of_g: DivergenceEntry,
    /// `∇*^i G*_ij`.
    pub star_of_g_star: DivergenceEntry,
    /// `∇*^i G_ij`.
    pub star_of_g: DivergenceEntry,
    /// `∇^i G*_ij`.
    pub nabla_of_g_star: DivergenceEntry,
    /// Torsion contribution `½(…)` in the `∇*^i G*_ij` closed form; zero
    /// for statistical bundles.
    pub torsion_term: Vec<f64>,
}

impl DivergenceReport {
    pub fn entries(&self) -> [(&'static str, &DivergenceEntry); 4] {
        [
            ("nabla_of_g", &self.nabla_of_g),
            ("star_of_g_star", &self.star_of_g_star),
            ("star_of_g", &self.star_of_g),
            ("nabla_of_g_star", &self.nabla_of_g_star),
        ]
    }

    pub fn max_relative(&self) -> f64 {
        self.entries()
            .iter()
            .map(|(_, e)| e.residual.relative())
            .fold(0.0, f64::max)
    }
}

/// Closed form of `∇_A^i G^A_ij` for the acting connection `A` with dual
/// partner `B`:
/// `−½{∇_A^i(R^B_ij − R^A_ji) + (∇_A^i g_ij) R^A + (∇_A,h g^{ls}) R^A_l^h_{sj}
/// + (∇_A,j g^{ls}) R^A_ls + (∇_A,h g^{hs}) R^B_sj} + ½E`,
/// with the torsion contraction
/// `E_j = g^{ls}(R^A_l^h_{rj} T^r_{hs} − R^A_lr T^r_{sj} + R^A_l^h_{rs} T^r_{jh})`.
struct SelfDivergence {
    value: Vec<f64>,
    pieces: Vec<Vec<f64>>,
    half_e: Vec<f64>,
}

fn closed_self_divergence(
    bundle: &GeometryBundle,
    local: &Local,
    side: Side,
    p: &ChartPoint,
    step: f64,
) -> Result<SelfDivergence, ChartError> {
    let n = local.n;
    let (a, b) = (slot(side), slot(side.other()));
    let other = side.other();
    let mixed = rank2_field(bundle, move |jets| {
        let ra = ricci_on(jets, side.pick(jets)).tensor;
        let rb = ricci_on(jets, other.pick(jets)).tensor;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = rb[i * n + j] - ra[j * n + i];
            }
        }
        out
    });
    let t1 = fd_divergence(&mixed, &local.gamma[a], &local.g_inv, p, step)?;
    let scalar = local.ric[a].scalar;
    let t2: Vec<f64> = local
        .metric_divergence(side)
        .iter()
        .map(|x| x * scalar)
        .collect();
    let dgi = local.inverse_metric_derivative(side);
    let dgi_at = |h: usize, l: usize, s: usize| dgi[(h * n + l) * n + s];
    let ra = &local.r[a];
    let ric_a = &local.ric[a].tensor;
    let ric_b = &local.ric[b].tensor;
    let t = &local.torsion[a];
    let t_at = |x: usize, y: usize, z: usize| t[(x * n + y) * n + z];
    let gi = &local.g_inv;
    let mut t3 = vec![0.0; n];
    let mut t4 = vec![0.0; n];
    let mut t5 = vec![0.0; n];
    let mut half_e = vec![0.0; n];
    for j in 0..n {
        for h in 0..n {
            for l in 0..n {
                for s in 0..n {
                    t3[j] += dgi_at(h, l, s) * ra.get(l, h, s, j);
                }
            }
        }
        for l in 0..n {
            for s in 0..n {
                t4[j] += dgi_at(j, l, s) * ric_a[l * n + s];
            }
        }
        for h in 0..n {
            for s in 0..n {
                t5[j] += dgi_at(h, h, s) * ric_b[s * n + j];
            }
        }
        let mut e = 0.0;
        for l in 0..n {
            for s in 0..n {
                let gls = gi[l * n + s];
                if gls == 0.0 {
                    continue;
                }
                for r in 0..n {
                    e -= gls * ric_a[l * n + r] * t_at(r, s, j);
                    for h in 0..n {
                        e += gls
                            * (ra.get(l, h, r, j) * t_at(r, h, s)
                                + ra.get(l, h, r, s) * t_at(r, j, h));
                    }
                }
            }
        }
        half_e[j] = 0.5 * e;
    }
    let value = (0..n)
        .map(|j| -0.5 * (t1[j] + t2[j] + t3[j] + t4[j] + t5[j]) + half_e[j])
        .collect();
    let mut pieces: Vec<Vec<f64>> = [t1, t2, t3, t4, t5]
        .into_iter()
        .map(|v| v.iter().map(|x| 0.5 * x).collect())
        .collect();
    pieces.push(half_e.clone());
    Ok(SelfDivergence {
        value,
        pieces,
        half_e,
    })
}

/// Closed form of `∇_A^i G^B_ij = ∇_A^i R^B_(ij) − ½(∇_A^i g_ij) R^B − ½ ∂_j R^B`
/// for the acting connection `A` and the Einstein tensor of `B = A*`.
fn closed_cross_divergence(
    bundle: &GeometryBundle,
    local: &Local,
    acting: Side,
    p: &ChartPoint,
    step: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>), ChartError> {
    let n = local.n;
    let source = acting.other();
    let sym = rank2_field(bundle, move |jets| {
        ricci_on(jets, source.pick(jets)).symmetric
    });
    let scalar = scalar_field(bundle, move |jets| ricci_on(jets, source.pick(jets)).scalar);
    let t1 = fd_divergence(&sym, &local.gamma[slot(acting)], &local.g_inv, p, step)?;
    let rb = local.ric[slot(source)].scalar;
    let t2: Vec<f64> = local
        .metric_divergence(acting)
        .iter()
        .map(|x| -0.5 * x * rb)
        .collect();
    let t3: Vec<f64> = fd_partials(&scalar, p, step)?
        .iter()
        .map(|x| -0.5 * x)
        .collect();
    let value = (0..n).map(|j| t1[j] + t2[j] + t3[j]).collect();
    Ok((value, vec![t1, t2, t3]))
}

fn require_kind(
    bundle: &GeometryBundle,
    allowed: &[BundleKind],
    expected: &'static str,
) -> Result<(), EinsteinError> {
    if allowed.contains(&bundle.kind) {
        Ok(())
    } else {
        Err(EinsteinError::KindMismatch {
            bundle: bundle.name.clone(),
            expected,
            found: bundle.kind,
        })
    }
}

fn ensure_inside(bundle: &GeometryBundle, p: &ChartPoint) -> Result<(), EinsteinError> {
    if !bundle.domain.contains(p.coords()) {
        return Err(ChartError::OutsideDomain {
            point: p.coords().to_vec(),
        }
        .into());
    }
    Ok(())
}

fn report(
    bundle: &GeometryBundle,
    p: &ChartPoint,
    step: f64,
    star_torsion: bool,
) -> Result<DivergenceReport, EinsteinError> {
    ensure_inside(bundle, p)?;
    let jets = bundle.jets(p)?;
    let local = Local::new(&jets);
    let mut constituents: Vec<f64> = Vec::new();
    for ric in &local.ric {
        constituents.extend_from_slice(&ric.tensor);
        constituents.push(ric.scalar);
    }
    // Dually flat pairs have R = R* = 0 with O(1) connection terms.
    constituents.push(curvature_term_scale(&jets.nabla).max(curvature_term_scale(&jets.star)));

    let lhs_of = |field: &ChartField, side: Side| {
        fd_divergence(field, &local.gamma[slot(side)], &local.g_inv, p, step)
    };
    let g_field = einstein_field(bundle, Side::Nabla);
    let gs_field = einstein_field(bundle, Side::Star);

    let self_entry = |side: Side, field: &ChartField, with_torsion: bool| {
        let SelfDivergence {
            mut value,
            pieces,
            half_e,
        } = closed_self_divergence(bundle, &local, side, p, step)?;
        if !with_torsion {
            for (v, e) in value.iter_mut().zip(&half_e) {
                *v -= e;
            }
        }
        let piece_refs: Vec<&[f64]> = pieces.iter().map(|v| v.as_slice()).collect();
        let lhs = lhs_of(field, side)?;
        Ok::<_, EinsteinError>((
            DivergenceEntry::new(lhs, value, &piece_refs, &constituents),
            half_e,
        ))
    };
    let cross_entry = |acting: Side, field: &ChartField| {
        let (value, pieces) = closed_cross_divergence(bundle, &local, acting, p, step)?;
        let piece_refs: Vec<&[f64]> = pieces.iter().map(|v| v.as_slice()).collect();
        let lhs = lhs_of(field, acting)?;
        Ok::<_, EinsteinError>(DivergenceEntry::new(lhs, value, &piece_refs, &constituents))
    };

    let (nabla_of_g, _) = self_entry(Side::Nabla, &g_field, false)?;
    let (star_of_g_star, torsion_term) = self_entry(Side::Star, &gs_field, star_torsion)?;
    Ok(DivergenceReport {
        nabla_of_g,
        star_of_g_star,
        star_of_g: cross_entry(Side::Star, &g_field)?,
        nabla_of_g_star: cross_entry(Side::Nabla, &gs_field)?,
        torsion_term: if star_torsion {
            torsion_term
        } else {
            vec![0.0; local.n]
        },
    })
}

/// The four divergences on a statistical bundle.
pub fn einstein_divergence_statistical(
    bundle: &GeometryBundle,
    p: &ChartPoint,
    step: f64,
) -> Result<DivergenceReport, EinsteinError> {
    require_kind(bundle, &[BundleKind::Statistical], "statistical")?;
    report(bundle, p, step, false)
}

/// The four divergences on a quasi-statistical bundle, where the closed
/// form of `∇*^i G*_ij` carries the torsion of `∇*`. A statistical bundle
/// is the torsion-free special case and is accepted.
pub fn einstein_divergence_quasi(
    bundle: &GeometryBundle,
    p: &ChartPoint,
    step: f64,
) -> Result<DivergenceReport, EinsteinError> {
    require_kind(
        bundle,
        &[BundleKind::QuasiStatistical, BundleKind::Statistical],
        "quasi_statistical",
    )?;
    report(bundle, p, step, true)
}

/// The α-Einstein divergence against its expansion through the pair.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaDivergence {
    /// `∇⁽ᵅ⁾^i G⁽ᵅ⁾_ij` by central differences of the α-Einstein field.
    pub lhs: Vec<f64>,
    /// `a² ∇^iG + ab(∇*^iG + ∇^iG*) + b² ∇*^iG* + c(a ∇^iH + b ∇*^iH)`.
    pub rhs: Vec<f64>,
    pub residual: Residual,
    /// The expansion with `c(∇^iH + ∇*^iH)` in place of the weighted
    /// `H` divergences, kept for comparison.
    pub unweighted_h_rhs: Vec<f64>,
    pub unweighted_h_residual: Residual,
}

/// Expansion of the α-Einstein divergence. The Einstein divergences on
/// the right are the closed forms, torsion contractions included, and the
/// `H` divergences are central differences.
pub fn alpha_einstein_divergence(
    bundle: &GeometryBundle,
    alpha: f64,
    p: &ChartPoint,
    step: f64,
) -> Result<AlphaDivergence, EinsteinError> {
    ensure_inside(bundle, p)?;
    let jets = bundle.jets(p)?;
    let local = Local::new(&jets);
    let n = local.n;
    let (a, b, c) = blend_coefficients(alpha);
    let gamma_alpha = jets.alpha(alpha).values();
    let lhs = fd_divergence(
        &alpha_einstein_field(bundle, alpha),
        &gamma_alpha,
        &local.g_inv,
        p,
        step,
    )?;
    let div_g = closed_self_divergence(bundle, &local, Side::Nabla, p, step)?.value;
    let div_gs = closed_self_divergence(bundle, &local, Side::Star, p, step)?.value;
    let (star_g, _) = closed_cross_divergence(bundle, &local, Side::Star, p, step)?;
    let (nabla_gs, _) = closed_cross_divergence(bundle, &local, Side::Nabla, p, step)?;
    let hf = h_field(bundle);
    let div_h = fd_divergence(&hf, &local.gamma[0], &local.g_inv, p, step)?;
    let star_h = fd_divergence(&hf, &local.gamma[1], &local.g_inv, p, step)?;

    let einstein_part: Vec<f64> = (0..n)
        .map(|j| a * a * div_g[j] + a * b * (star_g[j] + nabla_gs[j]) + b * b * div_gs[j])
        .collect();
    let rhs: Vec<f64> = (0..n)
        .map(|j| einstein_part[j] + c * (a * div_h[j] + b * star_h[j]))
        .collect();
    let unweighted: Vec<f64> = (0..n)
        .map(|j| einstein_part[j] + c * (div_h[j] + star_h[j]))
        .collect();

    let mut constituents: Vec<f64> = Vec::new();
    for ric in &local.ric {
        constituents.extend_from_slice(&ric.tensor);
    }
    // H and the quadratic part of G⁽ᵅ⁾ cancel inside 𝒦 (identically in 2D).
    let k = values(&jets.difference().data);
    constituents.extend(quadratic_ricci_of(&k, n));
    constituents.push(curvature_term_scale(&jets.nabla).max(curvature_term_scale(&jets.star)));
    let build = |r: &[f64]| {
        let mut res = Residual::of_difference(&lhs, r);
        for v in [&div_g, &div_gs, &star_g, &nabla_gs, &div_h, &star_h] {
            res.terms(v);
        }
        res.terms(&constituents);
        res
    };
    Ok(AlphaDivergence {
        residual: build(&rhs),
        unweighted_h_residual: build(&unweighted),
        lhs,
        rhs,
        unweighted_h_rhs: unweighted,
    })
}
