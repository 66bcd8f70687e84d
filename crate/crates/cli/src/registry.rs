//! The registered identity suite.
//!
//! Every identity has a stable snake_case name, a one-line statement in
//! index notation, a tolerance class and the bundle kinds it applies to.
//! Evaluators share a per-point cache so that grouped residuals and the
//! finite-difference fields are computed once per point.

use std::cell::OnceCell;
use std::collections::HashMap;

use chart_core::{ChartPoint, Residual, ToleranceClass};
use connections::{
    cubic_term_scale, dual_jet, duality_residual, nonmetricity_jet, structure_residuals, values,
    BundleKind, GeometryBundle, PointJets,
};
use curvature::{
    alpha_ricci_antisymmetry, alpha_ricci_residual, alpha_riemann_residual, bianchi_residuals,
    decomposition_residuals, ricci_antisymmetry_residual, ricci_decomposition_residuals,
    specialized_residuals, statistical_residuals, universal_residuals, BianchiResiduals,
    PointCurvature, RicciAntisymmetry,
};
use einstein::{
    alpha_einstein_divergence, alpha_einstein_residual, einstein_divergence_quasi,
    einstein_divergence_statistical, einstein_of, einstein_trace_residual, h_routes_residual,
    stress_energy_split, DivergenceReport, EinsteinSource,
};

use crate::error::CliError;

/// α values at which the blend identities are sampled.
pub const ALPHA_SAMPLES: [f64; 5] = [-1.0, -0.5, 0.0, 0.5, 1.0];

/// α used by single-α differential identities.
pub const DIFFERENTIAL_ALPHA: f64 = 0.5;

/// Bundle kinds an identity is stated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scope {
    Any,
    Statistical,
    QuasiStatistical,
    /// Statistical or quasi-statistical, where `∇` is torsion-free.
    TorsionFreeNabla,
}

impl Scope {
    pub fn admits(self, kind: BundleKind) -> bool {
        match self {
            Scope::Any => true,
            Scope::Statistical => kind == BundleKind::Statistical,
            Scope::QuasiStatistical => kind == BundleKind::QuasiStatistical,
            Scope::TorsionFreeNabla => kind.torsion_free(),
        }
    }
}

type Evaluate = fn(&PointContext) -> Result<Option<Residual>, CliError>;

#[derive(Clone, Copy)]
enum Evaluator {
    /// Looked up by name among the grouped curvature residuals.
    Grouped,
    Direct(Evaluate),
}

#[derive(Clone, Copy)]
pub struct Identity {
    pub name: &'static str,
    pub statement: &'static str,
    pub class: ToleranceClass,
    pub scope: Scope,
    evaluator: Evaluator,
}

impl std::fmt::Debug for Identity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Identity")
            .field("name", &self.name)
            .field("class", &self.class)
            .field("scope", &self.scope)
            .finish()
    }
}

impl Identity {
    /// Residual at the context point, or `None` when a conditional
    /// identity's hypothesis does not hold there.
    pub fn evaluate(&self, ctx: &PointContext) -> Result<Option<Residual>, CliError> {
        match self.evaluator {
            Evaluator::Grouped => Ok(ctx.grouped().get(self.name).copied()),
            Evaluator::Direct(f) => f(ctx),
        }
    }
}

/// Lazily computed geometry at one point and finite-difference step.
pub struct PointContext<'a> {
    pub bundle: &'a GeometryBundle,
    pub point: ChartPoint,
    pub step: f64,
    curvature: PointCurvature,
    grouped: OnceCell<HashMap<&'static str, Residual>>,
    bianchi: OnceCell<Result<[BianchiResiduals; 2], CliError>>,
    antisymmetry: OnceCell<Result<[RicciAntisymmetry; 2], CliError>>,
    divergence: OnceCell<Result<DivergenceReport, CliError>>,
}

impl<'a> PointContext<'a> {
    pub fn new(bundle: &'a GeometryBundle, point: ChartPoint, step: f64) -> Result<Self, CliError> {
        let curvature = PointCurvature::at(bundle, &point)?;
        Ok(PointContext {
            bundle,
            point,
            step,
            curvature,
            grouped: OnceCell::new(),
            bianchi: OnceCell::new(),
            antisymmetry: OnceCell::new(),
            divergence: OnceCell::new(),
        })
    }

    pub fn curvature(&self) -> &PointCurvature {
        &self.curvature
    }

    pub fn jets(&self) -> &PointJets {
        &self.curvature.jets
    }

    fn grouped(&self) -> &HashMap<&'static str, Residual> {
        self.grouped.get_or_init(|| {
            let pc = &self.curvature;
            let mut all = universal_residuals(pc);
            all.extend(decomposition_residuals(pc));
            all.extend(ricci_decomposition_residuals(pc));
            all.extend(specialized_residuals(pc, self.bundle.kind));
            if self.bundle.kind == BundleKind::Statistical {
                all.extend(statistical_residuals(pc));
            }
            all.into_iter().map(|nr| (nr.name, nr.residual)).collect()
        })
    }

    fn bianchi(&self) -> Result<&[BianchiResiduals; 2], CliError> {
        self.bianchi
            .get_or_init(|| {
                Ok([
                    bianchi_residuals(&self.bundle.nabla, &self.point, self.step)?,
                    bianchi_residuals(&self.bundle.nabla_star, &self.point, self.step)?,
                ])
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn antisymmetry(&self) -> Result<&[RicciAntisymmetry; 2], CliError> {
        self.antisymmetry
            .get_or_init(|| {
                Ok([
                    ricci_antisymmetry_residual(&self.bundle.nabla, &self.point, self.step)?,
                    ricci_antisymmetry_residual(&self.bundle.nabla_star, &self.point, self.step)?,
                ])
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    fn divergence(&self) -> Result<&DivergenceReport, CliError> {
        self.divergence
            .get_or_init(|| {
                let (b, p, h) = (self.bundle, &self.point, self.step);
                Ok(match b.kind {
                    BundleKind::Statistical => einstein_divergence_statistical(b, p, h)?,
                    _ => einstein_divergence_quasi(b, p, h)?,
                })
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

fn merge_all(rs: impl IntoIterator<Item = Residual>) -> Residual {
    rs.into_iter().fold(Residual::new(), Residual::merged)
}

fn merge_present(rs: impl IntoIterator<Item = Option<Residual>>) -> Option<Residual> {
    rs.into_iter().flatten().reduce(Residual::merged)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Largest `∂g` and `gΓ` magnitude over both connections.
fn metric_term_scale(jets: &PointJets) -> f64 {
    let g = max_abs(&jets.metric.g_values());
    cubic_term_scale(jets).max(g * jets.star.max_abs())
}

fn duality(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    Ok(Some(duality_residual(ctx.jets())))
}

fn dual_involution(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let j = ctx.jets();
    let back = dual_jet(&j.metric, &j.star);
    let mut r = Residual::of_difference(&back.values(), &j.nabla.values());
    r.term(j.star.max_abs());
    Ok(Some(r))
}

fn average_metric(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let j = ctx.jets();
    let c0 = values(&nonmetricity_jet(&j.metric, &j.average()));
    let mut r = Residual::of_sum(&[(1.0, &c0)]);
    r.term(metric_term_scale(j));
    Ok(Some(r))
}

fn alpha_nonmetricity(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let j = ctx.jets();
    let c = values(&j.cubic());
    let mut r = Residual::new();
    for alpha in ALPHA_SAMPLES {
        let ca = values(&nonmetricity_jet(&j.metric, &j.alpha(alpha)));
        r.add_sum(&[(1.0, &ca), (-alpha, &c)]);
    }
    r.term(metric_term_scale(j));
    Ok(Some(r))
}

fn statistical_structure(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let s = structure_residuals(ctx.bundle, &ctx.point)?;
    Ok(Some(merge_all([
        s.torsion_free,
        s.dual_torsion_free,
        s.cubic_totally_symmetric,
        s.average_is_levi_civita,
        s.difference_symmetric,
    ])))
}

fn quasi_structure(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let s = structure_residuals(ctx.bundle, &ctx.point)?;
    Ok(Some(merge_all([
        s.torsion_free,
        s.cubic_skew_is_dual_torsion,
        s.difference_skew_is_dual_torsion,
        s.dual_torsion_is_twice_average,
    ])))
}

fn alpha_curvature(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let pc = ctx.curvature();
    Ok(Some(merge_all(
        ALPHA_SAMPLES.map(|a| alpha_riemann_residual(pc, a)),
    )))
}

fn alpha_ricci(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let pc = ctx.curvature();
    Ok(Some(merge_all(
        ALPHA_SAMPLES.map(|a| alpha_ricci_residual(pc, a)),
    )))
}

fn einstein_symmetry(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let pc = ctx.curvature();
    let n = pc.dim;
    let mut r = Residual::new();
    for source in [EinsteinSource::Nabla, EinsteinSource::NablaStar] {
        let g = einstein_of(pc, source).tensor;
        let transposed: Vec<f64> = (0..n * n).map(|x| g[(x % n) * n + x / n]).collect();
        r.merge(Residual::of_difference(&g, &transposed));
    }
    Ok(Some(r))
}

fn einstein_trace(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let pc = ctx.curvature();
    let g = einstein_of(pc, EinsteinSource::Nabla);
    let gs = einstein_of(pc, EinsteinSource::NablaStar);
    let mut r = einstein_trace_residual(&g, &pc.ric, &pc.g_inv).merged(einstein_trace_residual(
        &gs,
        &pc.ric_star,
        &pc.g_inv,
    ));
    r.term(pc.term_scale());
    Ok(Some(r))
}

fn h_routes(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    Ok(Some(h_routes_residual(ctx.curvature())))
}

fn alpha_einstein(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let pc = ctx.curvature();
    Ok(Some(merge_all(
        ALPHA_SAMPLES.map(|a| alpha_einstein_residual(pc, a)),
    )))
}

fn effective_stress_energy(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let pc = ctx.curvature();
    let mut r = Residual::new();
    // The metric serves as a matter tensor with no special relation to G.
    for (alpha, kappa) in [(-0.5, 1.0), (0.0, 2.0), (0.5, 1.0)] {
        let split = stress_energy_split(pc, alpha, &pc.g, kappa)?;
        r.merge(split.round_trip);
        r.merge(split.rearrangement);
    }
    Ok(Some(r))
}

fn bianchi_first(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let [a, b] = ctx.bianchi()?;
    Ok(Some(a.first.merged(b.first)))
}

fn bianchi_second(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let [a, b] = ctx.bianchi()?;
    Ok(Some(a.second.merged(b.second)))
}

fn ricci_curl(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let [a, b] = ctx.antisymmetry()?;
    Ok(Some(a.curl_form.merged(b.curl_form)))
}

fn ricci_trace(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let [a, b] = ctx.antisymmetry()?;
    Ok(Some(a.trace_form.merged(b.trace_form)))
}

fn equiaffine_ricci(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let [a, b] = ctx.antisymmetry()?;
    Ok(merge_present([a.equiaffine_form, b.equiaffine_form]))
}

fn equiaffine_symmetry(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let [a, b] = ctx.antisymmetry()?;
    Ok(merge_present([
        a.equiaffine_symmetry,
        b.equiaffine_symmetry,
    ]))
}

fn alpha_ricci_skew(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let r = alpha_ricci_antisymmetry(
        &ctx.bundle.nabla,
        &ctx.bundle.nabla_star,
        DIFFERENTIAL_ALPHA,
        &ctx.point,
        ctx.step,
    )?;
    Ok(Some(r.expansion))
}

fn divergence_nabla(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    Ok(Some(ctx.divergence()?.nabla_of_g.residual))
}

fn divergence_star_star(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    Ok(Some(ctx.divergence()?.star_of_g_star.residual))
}

fn divergence_star(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    Ok(Some(ctx.divergence()?.star_of_g.residual))
}

fn divergence_nabla_star(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    Ok(Some(ctx.divergence()?.nabla_of_g_star.residual))
}

fn alpha_divergence(ctx: &PointContext) -> Result<Option<Residual>, CliError> {
    let d = alpha_einstein_divergence(ctx.bundle, DIFFERENTIAL_ALPHA, &ctx.point, ctx.step)?;
    Ok(Some(d.residual))
}

const fn grouped(name: &'static str, statement: &'static str, scope: Scope) -> Identity {
    Identity {
        name,
        statement,
        class: ToleranceClass::Algebraic,
        scope,
        evaluator: Evaluator::Grouped,
    }
}

const fn direct(
    name: &'static str,
    statement: &'static str,
    class: ToleranceClass,
    scope: Scope,
    f: Evaluate,
) -> Identity {
    Identity {
        name,
        statement,
        class,
        scope,
        evaluator: Evaluator::Direct(f),
    }
}

use Scope::{Any, QuasiStatistical, Statistical, TorsionFreeNabla};
use ToleranceClass::{Algebraic, Differential};

/// The full registry in report order. Duality comes first: every other
/// identity presumes that `∇*` is the dual of `∇`.
pub const REGISTRY: &[Identity] = &[
    direct(
        "duality",
        "∂_k g_ij = g_mi Γ^m_{jk} + g_mj Γ*^m_{ik}",
        Algebraic,
        Any,
        duality,
    ),
    direct(
        "dual_involution",
        "(∇*)* = ∇",
        Algebraic,
        Any,
        dual_involution,
    ),
    direct(
        "average_connection_metric",
        "∇⁽⁰⁾ g = 0",
        Algebraic,
        Any,
        average_metric,
    ),
    direct(
        "alpha_nonmetricity",
        "∇⁽ᵅ⁾ g = α C",
        Algebraic,
        Any,
        alpha_nonmetricity,
    ),
    direct(
        "statistical_structure",
        "T = 0, T* = 0, C totally symmetric, ∇⁽⁰⁾ = Levi-Civita, K symmetric",
        Algebraic,
        Statistical,
        statistical_structure,
    ),
    direct(
        "quasi_statistical_structure",
        "T = 0, C_ijk − C_jik = g(T*(∂_i,∂_j),∂_k), K(X,Y) − K(Y,X) = T*(X,Y), T* = 2T⁽⁰⁾",
        Algebraic,
        QuasiStatistical,
        quasi_structure,
    ),
    grouped("curvature_duality", "g(R(X,Y)Z, W) = −g(Z, R*(X,Y)W)", Any),
    grouped(
        "curvature_last_pair_antisymmetry",
        "R_m^k_{ji} = −R_m^k_{ij} for R, R* and their lowered forms",
        Any,
    ),
    grouped(
        "average_curvature_first_pair_antisymmetry",
        "R⁽⁰⁾_{xyzv} = −R⁽⁰⁾_{yxzv}",
        Any,
    ),
    grouped(
        "conjugate_symmetric_first_pair_antisymmetry",
        "R = R* implies R_{xyzv} = −R_{yxzv}",
        Any,
    ),
    grouped(
        "curvature_split_average_form",
        "R = R⁽⁰⁾ − ½D⁽⁰⁾ + ¼Q − ½T⁽⁰⁾K",
        Any,
    ),
    grouped(
        "curvature_split_nabla_form",
        "R = R⁽⁰⁾ − ½D − ¼Q − ½TK",
        Any,
    ),
    grouped(
        "dual_curvature_split_average_form",
        "R* = R⁽⁰⁾ + ½D⁽⁰⁾ + ¼Q + ½T⁽⁰⁾K",
        Any,
    ),
    grouped(
        "dual_curvature_split_nabla_form",
        "R* = R⁽⁰⁾ + ½D + ¾Q + ½TK",
        Any,
    ),
    grouped(
        "curvature_difference_average_form",
        "R − R* = −D⁽⁰⁾ − T⁽⁰⁾K",
        Any,
    ),
    grouped(
        "curvature_difference_nabla_form",
        "R − R* = −D − Q − TK",
        Any,
    ),
    grouped("curvature_sum_split", "R + R* = 2R⁽⁰⁾ + ½Q", Any),
    grouped(
        "ricci_split_average_form",
        "contraction of curvature_split_average_form",
        Any,
    ),
    grouped(
        "ricci_split_nabla_form",
        "contraction of curvature_split_nabla_form",
        Any,
    ),
    grouped(
        "dual_ricci_split_average_form",
        "contraction of dual_curvature_split_average_form",
        Any,
    ),
    grouped(
        "dual_ricci_split_nabla_form",
        "contraction of dual_curvature_split_nabla_form",
        Any,
    ),
    grouped(
        "ricci_difference_average_form",
        "contraction of curvature_difference_average_form",
        Any,
    ),
    grouped(
        "ricci_difference_nabla_form",
        "contraction of curvature_difference_nabla_form",
        Any,
    ),
    grouped(
        "ricci_sum_split",
        "Ric + Ric* = 2Ric⁽⁰⁾ + ½ contraction of Q",
        Any,
    ),
    grouped(
        "ricci_antisymmetric_part",
        "Ric_[mi] from the contracted split",
        Any,
    ),
    grouped(
        "dual_ricci_antisymmetric_part",
        "Ric*_[mi] from the contracted split",
        Any,
    ),
    grouped(
        "ricci_symmetric_part",
        "Ric_(mi) from the contracted split",
        Any,
    ),
    grouped(
        "dual_ricci_symmetric_part",
        "Ric*_(mi) from the contracted split",
        Any,
    ),
    grouped(
        "ricci_split_right_traceless",
        "Tr₁K = 0 and ∇⁽⁰⁾Tr₁K = 0 drop the trace terms of the Ricci split",
        Any,
    ),
    grouped(
        "ricci_split_right_traceless_divergence_free",
        "additionally Div⁽⁰⁾K = 0 leaves only quadratic terms",
        Any,
    ),
    grouped(
        "statistical_curvature_splits",
        "curvature splits with T = T* = T⁽⁰⁾ = 0",
        Statistical,
    ),
    grouped(
        "statistical_ricci_splits",
        "Ricci splits with T = T* = T⁽⁰⁾ = 0",
        Statistical,
    ),
    grouped(
        "statistical_ricci_antisymmetry",
        "Ric_[mi] = ½(∇⁽⁰⁾Tr₁K)_[mi] = −Ric*_[mi]",
        Statistical,
    ),
    grouped(
        "statistical_scalar_gap",
        "R − R* = −g^{mi}(Div⁽⁰⁾K − ∇⁽⁰⁾Tr₁K)_mi",
        Statistical,
    ),
    grouped(
        "left_traceless_ricci_symmetry",
        "Tr₂K = 0 to first order implies Ric and Ric* symmetric",
        Statistical,
    ),
    grouped(
        "quasi_statistical_curvature_splits",
        "curvature splits with T = 0 and T⁽⁰⁾ = ½T*",
        QuasiStatistical,
    ),
    grouped(
        "quasi_statistical_ricci_splits",
        "Ricci splits with T = 0 and T⁽⁰⁾ = ½T*",
        QuasiStatistical,
    ),
    direct(
        "alpha_curvature_blend",
        "R⁽ᵅ⁾ = aR + bR* − abQ, a = (1+α)/2, b = (1−α)/2",
        Algebraic,
        Any,
        alpha_curvature,
    ),
    direct(
        "alpha_ricci_blend",
        "Ric⁽ᵅ⁾ = aRic + bRic* + ab𝒦",
        Algebraic,
        Any,
        alpha_ricci,
    ),
    direct(
        "einstein_symmetry",
        "G_ij = G_ji and G*_ij = G*_ji",
        Algebraic,
        Any,
        einstein_symmetry,
    ),
    direct(
        "einstein_trace",
        "g^{ij} G_ij = (1 − n/2) R",
        Algebraic,
        Any,
        einstein_trace,
    ),
    direct(
        "h_tensor_routes",
        "H = 𝒦_(ij) − ½ g_ij 𝒦 agrees with its term-by-term expansion",
        Algebraic,
        Any,
        h_routes,
    ),
    direct(
        "alpha_einstein_blend",
        "G⁽ᵅ⁾ = aG + bG* + abH",
        Algebraic,
        Any,
        alpha_einstein,
    ),
    direct(
        "effective_stress_energy_round_trip",
        "G⁽ᵅ⁾ = κT implies G = κT_eff with T_eff = 2T/(1+α) − [(1−α)/(1+α) G* + (1−α)/2 H]/κ",
        Algebraic,
        Any,
        effective_stress_energy,
    ),
    direct(
        "bianchi_first",
        "Σ_cyc R_k^l_{ij} − T^m_{ij}T^l_{mk} − ∇_i T^l_{jk} = 0 for ∇ and ∇*",
        Differential,
        Any,
        bianchi_first,
    ),
    direct(
        "bianchi_second",
        "Σ_cyc ∇_i R_l^h_{jk} + R_l^h_{rk} T^r_{ij} = 0 for ∇ and ∇*",
        Differential,
        Any,
        bianchi_second,
    ),
    direct(
        "ricci_antisymmetry_curl_form",
        "R_ij − R_ji = ∇_k T^k_{ji} + ∂_i Γ^k_{jk} − ∂_j Γ^k_{ik}",
        Differential,
        Any,
        ricci_curl,
    ),
    direct(
        "ricci_antisymmetry_trace_form",
        "R_kj − R_jk + R_i^i_{jk} = torsion-squared terms + cyclic ∇T traces",
        Differential,
        Any,
        ricci_trace,
    ),
    direct(
        "equiaffine_ricci_antisymmetry",
        "closed Tr₂Γ: R_ij − R_ji = ∇_k T^k_{ji} − (∂_i T^k_{jk} − ∂_j T^k_{ik})",
        Differential,
        Any,
        equiaffine_ricci,
    ),
    direct(
        "equiaffine_ricci_symmetry",
        "closed Tr₂Γ and T = 0: R_ij = R_ji",
        Differential,
        Any,
        equiaffine_symmetry,
    ),
    direct(
        "alpha_ricci_antisymmetry",
        "Ric⁽ᵅ⁾_[ij] expanded through ∇, ∇* and their torsions (α = 0.5)",
        Differential,
        Any,
        alpha_ricci_skew,
    ),
    direct(
        "einstein_divergence",
        "∇^i G_ij from the contracted Bianchi identity and nonmetricity",
        Differential,
        TorsionFreeNabla,
        divergence_nabla,
    ),
    direct(
        "dual_einstein_dual_divergence",
        "∇*^i G*_ij, with the torsion term ½E on quasi-statistical bundles",
        Differential,
        TorsionFreeNabla,
        divergence_star_star,
    ),
    direct(
        "einstein_dual_divergence",
        "∇*^i G_ij = ∇*^i Ric_(ij) − ½(∇*^i g_ij) R − ½∂_j R",
        Differential,
        TorsionFreeNabla,
        divergence_star,
    ),
    direct(
        "dual_einstein_divergence",
        "∇^i G*_ij = ∇^i Ric*_(ij) − ½(∇^i g_ij) R* − ½∂_j R*",
        Differential,
        TorsionFreeNabla,
        divergence_nabla_star,
    ),
    direct(
        "alpha_einstein_divergence",
        "∇⁽ᵅ⁾^i G⁽ᵅ⁾_ij = a²∇G + ab(∇*G + ∇G*) + b²∇*G* + ab(a∇H + b∇*H) (α = 0.5)",
        Differential,
        TorsionFreeNabla,
        alpha_divergence,
    ),
];

/// Identities that apply to bundles of `kind`, in registry order.
pub fn suite_for(kind: BundleKind) -> Vec<&'static Identity> {
    REGISTRY.iter().filter(|i| i.scope.admits(kind)).collect()
}

pub fn find(name: &str) -> Option<&'static Identity> {
    REGISTRY.iter().find(|i| i.name == name)
}

pub fn names() -> Vec<&'static str> {
    REGISTRY.iter().map(|i| i.name).collect()
}
