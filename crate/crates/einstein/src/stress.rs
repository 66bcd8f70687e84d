use chart_core::{ChartField, ChartPoint, Residual, Variance};
use connections::GeometryBundle;
use curvature::{blend_coefficients, PointCurvature};

use crate::error::EinsteinError;
use crate::h_tensor::h_tensor_of;
use crate::tensor::{einstein_from_ricci, einstein_of, EinsteinSource};

/// Effective stress-energy of the `∇` field equation when the α-field
/// equation `G⁽ᵅ⁾ = κT` holds.
#[derive(Clone, Debug, PartialEq)]
pub struct StressEnergySplit {
    /// `2/(1+α) T − (1/κ)[(1−α)/(1+α) G* + (1−α)/2 H]`.
    pub effective: Vec<f64>,
    /// `a κ T_eff + b G* + c H − κ T`: the α-field equation rebuilt from
    /// the split.
    pub rearrangement: Residual,
    /// `G − κ T_eff` with `T = G⁽ᵅ⁾/κ`, so that the α-field equation holds.
    pub round_trip: Residual,
    /// `2/(1+α) T − (1/κ)[(1−α²) G* − (1+α)²(1−α)/2 H]`.
    pub literal: Vec<f64>,
    /// `G − κ T_lit` with `T = G⁽ᵅ⁾/κ`.
    pub literal_round_trip: Residual,
}

fn effective_from(
    t: &[f64],
    g_star: &[f64],
    h: &[f64],
    alpha: f64,
    kappa: f64,
    literal: bool,
) -> Vec<f64> {
    let (cg, ch) = if literal {
        (
            1.0 - alpha * alpha,
            -(1.0 + alpha) * (1.0 + alpha) * (1.0 - alpha) / 2.0,
        )
    } else {
        ((1.0 - alpha) / (1.0 + alpha), (1.0 - alpha) / 2.0)
    };
    (0..t.len())
        .map(|x| 2.0 / (1.0 + alpha) * t[x] - (cg * g_star[x] + ch * h[x]) / kappa)
        .collect()
}

/// The split at a point whose curvature is already known, for matter
/// components `t` in `[i n + j]` layout.
pub fn stress_energy_split(
    pc: &PointCurvature,
    alpha: f64,
    t: &[f64],
    kappa: f64,
) -> Result<StressEnergySplit, EinsteinError> {
    if alpha == -1.0 {
        return Err(EinsteinError::AlphaSingular);
    }
    let n = pc.dim;
    if t.len() != n * n {
        return Err(EinsteinError::MatterShape { expected: n });
    }
    let (a, b, c) = blend_coefficients(alpha);
    let g = einstein_from_ricci(&pc.ric, &pc.g);
    let g_star = einstein_from_ricci(&pc.ric_star, &pc.g);
    let h = h_tensor_of(pc);
    let g_alpha = einstein_of(pc, EinsteinSource::Alpha(alpha)).tensor;

    let effective = effective_from(t, &g_star, &h, alpha, kappa, false);
    let kt: Vec<f64> = t.iter().map(|x| kappa * x).collect();
    let kte: Vec<f64> = effective.iter().map(|x| kappa * x).collect();
    let rearrangement = Residual::of_sum(&[(a, &kte), (b, &g_star), (c, &h), (-1.0, &kt)]);

    // Matter chosen so that the α-field equation holds exactly.
    let t_field: Vec<f64> = g_alpha.iter().map(|x| x / kappa).collect();
    let check = |literal: bool| {
        let te = effective_from(&t_field, &g_star, &h, alpha, kappa, literal);
        let kte: Vec<f64> = te.iter().map(|x| kappa * x).collect();
        let mut r = Residual::of_difference(&g, &kte);
        r.terms(&g_star);
        r.terms(&g_alpha);
        r
    };
    Ok(StressEnergySplit {
        effective,
        rearrangement,
        round_trip: check(false),
        literal: effective_from(t, &g_star, &h, alpha, kappa, true),
        literal_round_trip: check(true),
    })
}

/// The split for a matter field evaluated at `p`.
pub fn effective_stress_energy(
    bundle: &GeometryBundle,
    alpha: f64,
    matter: &ChartField,
    p: &ChartPoint,
    kappa: f64,
) -> Result<StressEnergySplit, EinsteinError> {
    if alpha == -1.0 {
        return Err(EinsteinError::AlphaSingular);
    }
    let n = bundle.dim();
    if matter.dim() != n || matter.variance() != [Variance::Lower, Variance::Lower] {
        return Err(EinsteinError::MatterShape { expected: n });
    }
    let pc = PointCurvature::at(bundle, p)?;
    let t = matter.eval(p)?;
    stress_energy_split(&pc, alpha, t.data(), kappa)
}
