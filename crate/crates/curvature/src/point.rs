use chart_core::{ChartPoint, Jet1, Variance};
use connections::{torsion_jet, values, GeometryBundle, PointJets};

use crate::covariant::covariant_derivative_jets;
use crate::differential::curvature_term_scale;
use crate::error::CurvatureError;
use crate::riemann::{ricci, riemann_of, RicciValue, RiemannValue};

const K_VARIANCE: [Variance; 3] = [Variance::Upper, Variance::Lower, Variance::Lower];

/// All curvature data of a dual pair at one point.
///
/// Rank-3 arrays are stored row-major; `k[(a n + b) n + c]` is `K^a_{bc}`
/// with `K = Γ* − Γ`. `dk` and `dk0` are `∇_d K^a_{bc}` and `∇⁽⁰⁾_d K^a_{bc}`
/// at `[((a n + b) n + c) n + d]`.
#[derive(Clone, Debug)]
pub struct PointCurvature {
    pub dim: usize,
    pub jets: PointJets,
    pub g: Vec<f64>,
    pub g_inv: Vec<f64>,
    pub gamma: Vec<f64>,
    pub gamma_star: Vec<f64>,
    pub gamma_avg: Vec<f64>,
    pub k: Vec<f64>,
    pub k_jets: Vec<Jet1>,
    pub torsion: Vec<f64>,
    pub torsion_star: Vec<f64>,
    pub torsion_avg: Vec<f64>,
    pub r: RiemannValue,
    pub r_star: RiemannValue,
    pub r_avg: RiemannValue,
    pub ric: RicciValue,
    pub ric_star: RicciValue,
    pub ric_avg: RicciValue,
    pub dk: Vec<f64>,
    pub dk_avg: Vec<f64>,
    pub cubic: Vec<f64>,
}

impl PointCurvature {
    /// [`curvature_term_scale`] over both connections: the reference
    /// magnitude for curvature identities whose terms cancel, as on dually
    /// flat or flat geometries.
    pub fn term_scale(&self) -> f64 {
        curvature_term_scale(&self.jets.nabla).max(curvature_term_scale(&self.jets.star))
    }

    pub fn from_jets(jets: PointJets) -> Self {
        let n = jets.dim();
        let g = jets.metric.g_values();
        let g_inv = jets.metric.g_inv_values();
        let avg = jets.average();
        let k_conn = jets.difference();
        let k_jets = k_conn.data.clone();
        let gamma = jets.nabla.values();
        let gamma_avg = avg.values();
        let r = riemann_of(&jets.nabla);
        let r_star = riemann_of(&jets.star);
        let r_avg = riemann_of(&avg);
        let ric = ricci(&r, &g_inv);
        let ric_star = ricci(&r_star, &g_inv);
        let ric_avg = ricci(&r_avg, &g_inv);
        let dk = covariant_derivative_jets(&gamma, n, &K_VARIANCE, &k_jets);
        let dk_avg = covariant_derivative_jets(&gamma_avg, n, &K_VARIANCE, &k_jets);
        PointCurvature {
            dim: n,
            g,
            g_inv,
            gamma_star: jets.star.values(),
            k: values(&k_jets),
            torsion: values(&torsion_jet(&jets.nabla)),
            torsion_star: values(&torsion_jet(&jets.star)),
            torsion_avg: values(&torsion_jet(&avg)),
            cubic: values(&jets.cubic()),
            gamma,
            gamma_avg,
            k_jets,
            r,
            r_star,
            r_avg,
            ric,
            ric_star,
            ric_avg,
            dk,
            dk_avg,
            jets,
        }
    }

    pub fn at(bundle: &GeometryBundle, p: &ChartPoint) -> Result<Self, CurvatureError> {
        Ok(PointCurvature::from_jets(bundle.jets(p)?))
    }

    #[inline]
    pub fn k(&self, a: usize, b: usize, c: usize) -> f64 {
        let n = self.dim;
        self.k[(a * n + b) * n + c]
    }

    /// Right trace `Tr₁(K)_b = K^a_{ba}`.
    pub fn trace_right(&self) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|b| (0..n).map(|a| self.k(a, b, a)).sum())
            .collect()
    }

    /// Left trace `Tr₂(K)_c = K^a_{ac}`.
    pub fn trace_left(&self) -> Vec<f64> {
        let n = self.dim;
        (0..n)
            .map(|c| (0..n).map(|a| self.k(a, a, c)).sum())
            .collect()
    }
}
