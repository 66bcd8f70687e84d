use std::fmt;

use chart_core::{
    halton_points, ChartPoint, Domain, Jet1, Residual, SmoothField, ToleranceClass, DEFAULT_MARGIN,
};

use crate::error::ConnectionError;
use crate::field::{dual_connection, levi_civita, ConnectionField};
use crate::jets::{
    dual_jet, levi_civita_jet, nonmetricity_jet, torsion_jet, values, ConnJet, MetricJet,
};

/// Structural class of a bundle, which selects the identity suites that apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BundleKind {
    General,
    PreStatistical,
    Statistical,
    QuasiStatistical,
}

impl BundleKind {
    pub fn label(self) -> &'static str {
        match self {
            BundleKind::General => "general",
            BundleKind::PreStatistical => "pre_statistical",
            BundleKind::Statistical => "statistical",
            BundleKind::QuasiStatistical => "quasi_statistical",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "general" => Some(BundleKind::General),
            "pre_statistical" => Some(BundleKind::PreStatistical),
            "statistical" => Some(BundleKind::Statistical),
            "quasi_statistical" => Some(BundleKind::QuasiStatistical),
            _ => None,
        }
    }

    /// Whether `∇` is torsion-free by construction.
    pub fn torsion_free(self) -> bool {
        matches!(self, BundleKind::Statistical | BundleKind::QuasiStatistical)
    }
}

impl fmt::Display for BundleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// How the cubic tensor is symmetrized when building a pair from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubicMode {
    TotallySymmetric,
    SymmetricLastTwo,
}

/// A metric together with a connection and its partner.
#[derive(Clone, Debug)]
pub struct GeometryBundle {
    pub name: String,
    pub metric: SmoothField,
    pub nabla: ConnectionField,
    pub nabla_star: ConnectionField,
    pub domain: Domain,
    pub kind: BundleKind,
}

/// Everything pointwise curvature code needs, evaluated once.
#[derive(Clone, Debug)]
pub struct PointJets {
    pub metric: MetricJet,
    pub nabla: ConnJet,
    pub star: ConnJet,
}

impl PointJets {
    pub fn dim(&self) -> usize {
        self.metric.dim
    }

    /// `K = Γ* − Γ`.
    pub fn difference(&self) -> ConnJet {
        self.star.combine(1.0, &self.nabla, -1.0)
    }

    pub fn average(&self) -> ConnJet {
        self.nabla.combine(0.5, &self.star, 0.5)
    }

    pub fn alpha(&self, alpha: f64) -> ConnJet {
        if alpha == 1.0 {
            return self.nabla.clone();
        }
        if alpha == -1.0 {
            return self.star.clone();
        }
        self.nabla
            .combine(0.5 * (1.0 + alpha), &self.star, 0.5 * (1.0 - alpha))
    }

    pub fn levi_civita(&self) -> ConnJet {
        levi_civita_jet(&self.metric)
    }

    /// Nonmetricity of `∇`.
    pub fn cubic(&self) -> Vec<Jet1> {
        nonmetricity_jet(&self.metric, &self.nabla)
    }
}

impl GeometryBundle {
    /// A bundle whose partner is the dual of `nabla`.
    pub fn from_connection(
        name: &str,
        metric: SmoothField,
        nabla: ConnectionField,
        kind: BundleKind,
    ) -> Self {
        let nabla_star = dual_connection(&metric, &nabla);
        let domain = metric.domain().clone();
        GeometryBundle {
            name: name.to_string(),
            metric,
            nabla,
            nabla_star,
            domain,
            kind,
        }
    }

    /// The self-dual Levi-Civita bundle of a metric.
    pub fn levi_civita(name: &str, metric: SmoothField) -> Self {
        let lc = levi_civita(&metric);
        let domain = metric.domain().clone();
        GeometryBundle {
            name: name.to_string(),
            metric,
            nabla: lc.clone(),
            nabla_star: lc,
            domain,
            kind: BundleKind::Statistical,
        }
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn jets(&self, p: &ChartPoint) -> Result<PointJets, ConnectionError> {
        Ok(PointJets {
            metric: MetricJet::at(&self.metric, p)?,
            nabla: self.nabla.jet(p)?,
            star: self.nabla_star.jet(p)?,
        })
    }

    /// Same geometry with the roles of the two connections exchanged.
    pub fn swapped(&self) -> Self {
        let kind = match self.kind {
            BundleKind::QuasiStatistical => BundleKind::General,
            k => k,
        };
        GeometryBundle {
            name: format!("{}-swapped", self.name),
            metric: self.metric.clone(),
            nabla: self.nabla_star.clone(),
            nabla_star: self.nabla.clone(),
            domain: self.domain.clone(),
            kind,
        }
    }

    /// Checks duality and the invariants of the declared kind at `count`
    /// Halton points.
    pub fn validate(&self, count: usize) -> Result<(), ConnectionError> {
        for p in halton_points(&self.domain, count, 0, DEFAULT_MARGIN) {
            self.validate_at(&p)?;
        }
        Ok(())
    }

    pub fn validate_at(&self, p: &ChartPoint) -> Result<(), ConnectionError> {
        let tol = ToleranceClass::Algebraic.tolerance();
        let jets = self.jets(p)?;
        let fail = |invariant: &'static str, r: Residual| -> Result<(), ConnectionError> {
            if r.relative() <= tol {
                Ok(())
            } else {
                Err(ConnectionError::InvariantViolation {
                    invariant,
                    residual: r.relative(),
                    point: p.coords().to_vec(),
                })
            }
        };
        fail("duality", duality_residual(&jets))?;
        let scale = jets.nabla.max_abs().max(jets.star.max_abs());
        let torsion = |c: &ConnJet| {
            let mut r = Residual::new();
            r.terms(
                &values(&torsion_jet(c))
                    .iter()
                    .map(|x| x.abs())
                    .collect::<Vec<_>>(),
            );
            Residual {
                abs: r.scale,
                scale,
            }
        };
        let mut total = total_symmetry_residual(&values(&jets.cubic()), jets.dim());
        total.term(cubic_term_scale(&jets));
        match self.kind {
            BundleKind::General => Ok(()),
            BundleKind::Statistical => {
                fail("torsion of nabla vanishes", torsion(&jets.nabla))?;
                fail("torsion of nabla_star vanishes", torsion(&jets.star))?;
                fail("cubic total symmetry", total)
            }
            BundleKind::QuasiStatistical => fail("torsion of nabla vanishes", torsion(&jets.nabla)),
            BundleKind::PreStatistical => {
                let t = values(&torsion_jet(&jets.nabla));
                let ts = values(&torsion_jet(&jets.star));
                fail("equal torsions", Residual::of_difference(&t, &ts))?;
                fail("cubic total symmetry", total)
            }
        }
    }
}

/// Residual of `∂_k g_ij − g_mi Γ^m_{jk} − g_mj Γ*^m_{ik} = 0`.
pub fn duality_residual(jets: &PointJets) -> Residual {
    let n = jets.dim();
    let m = &jets.metric;
    let mut r = Residual::new();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut total = m.dg[(k * n + i) * n + j].v;
                r.term(total);
                for mm in 0..n {
                    let a = m.g(mm, i) * jets.nabla.value(mm, j, k);
                    let b = m.g(mm, j) * jets.star.value(mm, i, k);
                    r.term(a);
                    r.term(b);
                    total -= a + b;
                }
                r.defect(total);
            }
        }
    }
    r
}

/// Magnitude of the terms `∂g` and `gΓ` that make up the cubic tensor, so
/// that a nonmetricity cancelling to rounding noise is judged against them.
pub fn cubic_term_scale(jets: &PointJets) -> f64 {
    let dg = jets.metric.dg.iter().fold(0.0f64, |m, x| m.max(x.v.abs()));
    let g = jets
        .metric
        .g_values()
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    dg.max(g * jets.nabla.max_abs())
}

/// Residual of `C_kij = C_ikj` for a cubic tensor in `[k][i][j]` layout.
pub fn total_symmetry_residual(c: &[f64], n: usize) -> Residual {
    let mut r = Residual::new();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let a = c[(k * n + i) * n + j];
                let b = c[(i * n + k) * n + j];
                r.term(a);
                r.defect(a - b);
            }
        }
    }
    r
}

fn check_cubic(c: &SmoothField, mode: CubicMode, count: usize) -> Result<(), ConnectionError> {
    let n = c.dim();
    for p in halton_points(c.domain(), count, 0, DEFAULT_MARGIN) {
        let v = c.values(&p)?;
        let scale = v.max_abs().max(1e-300);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let a = v.get(&[k, i, j]);
                    let checks: &[(&'static str, f64)] = match mode {
                        CubicMode::SymmetricLastTwo => &[("last-two symmetry", v.get(&[k, j, i]))],
                        CubicMode::TotallySymmetric => &[
                            ("last-two symmetry", v.get(&[k, j, i])),
                            ("total symmetry", v.get(&[i, k, j])),
                        ],
                    };
                    for (symmetry, b) in checks {
                        let magnitude = (a - b).abs();
                        if magnitude > 1e-12 * scale {
                            return Err(ConnectionError::CubicSymmetryViolation {
                                symmetry,
                                k,
                                i,
                                j,
                                magnitude,
                                point: p.coords().to_vec(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// `g^{mz} C_{jiz}` as the shift applied to `Γ^m_{ij}`.
fn raised_cubic(m: &MetricJet, c: &[Jet1]) -> ConnJet {
    let n = m.dim;
    let mut out = ConnJet::zeros(n);
    for mm in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = Jet1::ZERO;
                for z in 0..n {
                    acc += m.g_inv[mm * n + z] * c[(j * n + i) * n + z];
                }
                let o = out.idx(mm, i, j);
                out.data[o] = acc;
            }
        }
    }
    out
}

fn cubic_jets(c: &SmoothField, p: &ChartPoint) -> Result<Vec<Jet1>, chart_core::ChartError> {
    Ok(c.jets(p)?.into_iter().map(|j| j.to_jet1()).collect())
}

/// The pair `∇ = ∇⁰ − ½ C♯`, `∇* = ∇⁰ + ½ C♯` around the Levi-Civita
/// connection `∇⁰`, applied without any symmetrization.
pub fn recovered_pair(
    metric: &SmoothField,
    cubic: &SmoothField,
) -> (ConnectionField, ConnectionField) {
    let build = |sign: f64| {
        let (g, c) = (metric.clone(), cubic.clone());
        ConnectionField::new(metric.dim(), metric.domain().clone(), move |p| {
            let m = MetricJet::at(&g, p)?;
            let shift = raised_cubic(&m, &cubic_jets(&c, p)?);
            Ok(levi_civita_jet(&m).combine(1.0, &shift, 0.5 * sign))
        })
    };
    (build(-1.0), build(1.0))
}

/// Builds a dual pair from a metric and a cubic tensor.
///
/// With [`CubicMode::TotallySymmetric`] the result is statistical. With
/// [`CubicMode::SymmetricLastTwo`] the torsion of `∇` is removed by taking
/// the symmetric part of its coefficients, and `∇*` is recomputed as the
/// dual, so that all torsion ends up in `∇*`.
pub fn statistical_pair_from_cubic(
    metric: &SmoothField,
    cubic: &SmoothField,
    mode: CubicMode,
    name: &str,
) -> Result<GeometryBundle, ConnectionError> {
    if metric.dim() != cubic.dim() {
        return Err(ConnectionError::DimensionMismatch(
            metric.dim(),
            cubic.dim(),
        ));
    }
    check_cubic(cubic, mode, 20)?;
    let (nabla, _) = recovered_pair(metric, cubic);
    let bundle = match mode {
        CubicMode::TotallySymmetric => {
            GeometryBundle::from_connection(name, metric.clone(), nabla, BundleKind::Statistical)
        }
        CubicMode::SymmetricLastTwo => {
            let sym = nabla.map(|_, j| Ok(j.symmetrized()));
            GeometryBundle::from_connection(name, metric.clone(), sym, BundleKind::QuasiStatistical)
        }
    };
    bundle.validate(20)?;
    Ok(bundle)
}

/// Dual coefficients computed directly from jets, for callers holding them.
pub fn dual_of(jets: &PointJets, conn: &ConnJet) -> ConnJet {
    dual_jet(&jets.metric, conn)
}
