//! Residuals of the structural conditions that classify a dual pair.

use chart_core::{ChartPoint, Residual, ToleranceClass};

use crate::bundle::{cubic_term_scale, total_symmetry_residual, GeometryBundle};
use crate::error::ConnectionError;
use crate::jets::{levi_civita_jet, torsion_jet, values};

/// Each field is the residual of one condition; a condition holds when the
/// relative residual is within the algebraic tolerance.
#[derive(Clone, Debug, Default)]
pub struct StructureResiduals {
    /// `T = 0`.
    pub torsion_free: Residual,
    /// `T* = 0`.
    pub dual_torsion_free: Residual,
    /// `C` totally symmetric.
    pub cubic_totally_symmetric: Residual,
    /// `∇⁰` equals the Levi-Civita connection.
    pub average_is_levi_civita: Residual,
    /// `T = T*`.
    pub torsions_equal: Residual,
    /// `T⁰ = T`.
    pub average_torsion_is_torsion: Residual,
    /// `K(X,Y) = K(Y,X)`.
    pub difference_symmetric: Residual,
    /// `C(X,Y,Z) − C(Y,X,Z) = g(T*(X,Y), Z)`.
    pub cubic_skew_is_dual_torsion: Residual,
    /// `T* = 2 T⁰`.
    pub dual_torsion_is_twice_average: Residual,
    /// `K(X,Y) − K(Y,X) = T*(X,Y)`.
    pub difference_skew_is_dual_torsion: Residual,
}

pub fn holds(r: &Residual) -> bool {
    r.relative() <= ToleranceClass::Algebraic.tolerance()
}

fn vanishing(v: &[f64], scale: f64) -> Residual {
    let abs = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Residual { abs, scale }
}

pub fn structure_residuals(
    bundle: &GeometryBundle,
    p: &ChartPoint,
) -> Result<StructureResiduals, ConnectionError> {
    let jets = bundle.jets(p)?;
    let n = jets.dim();
    let coeff_scale = jets.nabla.max_abs().max(jets.star.max_abs());
    let t = values(&torsion_jet(&jets.nabla));
    let ts = values(&torsion_jet(&jets.star));
    let avg = jets.average();
    let t0 = values(&torsion_jet(&avg));
    let c = values(&jets.cubic());
    let k = jets.difference().values();
    let lc = levi_civita_jet(&jets.metric).values();
    let idx = |a: usize, b: usize, c_: usize| (a * n + b) * n + c_;

    let mut out = StructureResiduals {
        torsion_free: vanishing(&t, coeff_scale),
        dual_torsion_free: vanishing(&ts, coeff_scale),
        cubic_totally_symmetric: total_symmetry_residual(&c, n),
        average_is_levi_civita: Residual::of_difference(&avg.values(), &lc),
        torsions_equal: Residual::of_difference(&t, &ts),
        average_torsion_is_torsion: Residual::of_difference(&t0, &t),
        ..Default::default()
    };
    out.cubic_totally_symmetric.term(cubic_term_scale(&jets));
    out.torsions_equal.term(coeff_scale);
    out.average_torsion_is_torsion.term(coeff_scale);

    let mut ksym = Residual::new();
    let mut cskew = Residual::new();
    let mut kskew = Residual::new();
    for a in 0..n {
        for b in 0..n {
            for z in 0..n {
                // K(∂a, ∂b) has components K[z][b][a].
                let kab = k[idx(z, b, a)];
                let kba = k[idx(z, a, b)];
                ksym.term(kab);
                ksym.defect(kab - kba);
                let tsab = ts[idx(z, a, b)];
                kskew.add_sum(&[(1.0, &[kab]), (-1.0, &[kba]), (-1.0, &[tsab])]);
                let lowered: f64 = (0..n).map(|m| jets.metric.g(z, m) * ts[idx(m, a, b)]).sum();
                cskew.add_sum(&[
                    (1.0, &[c[idx(a, b, z)]]),
                    (-1.0, &[c[idx(b, a, z)]]),
                    (-1.0, &[lowered]),
                ]);
            }
        }
    }
    ksym.term(coeff_scale);
    out.difference_symmetric = ksym;
    out.cubic_skew_is_dual_torsion = cskew;
    out.difference_skew_is_dual_torsion = kskew;
    let twice: Vec<f64> = t0.iter().map(|x| 2.0 * x).collect();
    out.dual_torsion_is_twice_average = Residual::of_difference(&ts, &twice);
    out.dual_torsion_is_twice_average.term(coeff_scale);
    Ok(out)
}
