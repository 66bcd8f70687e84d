//! Identities that involve an explicit derivative of a derived field.
//!
//! Covariant derivatives of curvature and torsion use central differences
//! of the field recomputed at stencil points, so these residuals decay as
//! `O(h²)` in the base step `h`. Derivatives of connection coefficients
//! and of torsion that appear outside a covariant derivative are exact.

use chart_core::{ChartField, ChartPoint, Residual, ToleranceClass, Variance};
use connections::{alpha_weights, torsion_jet, values, ConnJet, ConnectionField};

use crate::covariant::{covariant_derivative, fd_partials};
use crate::error::CurvatureError;
use crate::riemann::{ricci_tensor, riemann_of};

const TORSION_VARIANCE: [Variance; 3] = [Variance::Upper, Variance::Lower, Variance::Lower];

/// Curvature `R_m^k_{ji}` of `conn` as a chart field.
pub fn riemann_field(conn: &ConnectionField) -> ChartField {
    let c = conn.clone();
    ChartField::new(
        conn.dim(),
        vec![
            Variance::Lower,
            Variance::Upper,
            Variance::Lower,
            Variance::Lower,
        ],
        conn.domain().clone(),
        move |p| Ok(riemann_of(&c.jet(p)?).components()),
    )
}

/// Torsion `T^i_{kl}` of `conn` as a chart field.
pub fn torsion_field(conn: &ConnectionField) -> ChartField {
    let c = conn.clone();
    let n = conn.dim();
    ChartField::new(
        n,
        TORSION_VARIANCE.to_vec(),
        conn.domain().clone(),
        move |p| {
            let t = values(&torsion_jet(&c.jet(p)?));
            chart_core::TensorComponents::from_vec(n, TORSION_VARIANCE.to_vec(), t)
        },
    )
}

fn ensure_inside(conn: &ConnectionField, p: &ChartPoint) -> Result<(), CurvatureError> {
    if !conn.domain().contains(p.coords()) {
        return Err(chart_core::ChartError::OutsideDomain {
            point: p.coords().to_vec(),
        }
        .into());
    }
    Ok(())
}

/// Both Bianchi identities for a connection with torsion.
///
/// `first` is the cyclic sum
/// `Σ R_k^l_{ij} − T^m_{ij} T^l_{mk} − ∇_i T^l_{jk} = 0` and `second` is
/// `Σ ∇_i R_l^h_{jk} + R_l^h_{rk} T^r_{ij} = 0`, each cyclic in `(i, j, k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BianchiResiduals {
    pub first: Residual,
    pub second: Residual,
}

const CYCLES: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

pub fn bianchi_residuals(
    conn: &ConnectionField,
    p: &ChartPoint,
    step: f64,
) -> Result<BianchiResiduals, CurvatureError> {
    ensure_inside(conn, p)?;
    let n = conn.dim();
    let jet = conn.jet(p)?;
    let gamma = jet.values();
    let r = riemann_of(&jet);
    let t = values(&torsion_jet(&jet));
    let t_at = |a: usize, b: usize, c: usize| t[(a * n + b) * n + c];

    let dt = covariant_derivative(
        &gamma,
        n,
        &TORSION_VARIANCE,
        &t,
        &fd_partials(&torsion_field(conn), p, step)?,
    );
    let r_field = riemann_field(conn);
    let dr = covariant_derivative(
        &gamma,
        n,
        r_field.variance(),
        r.data(),
        &fd_partials(&r_field, p, step)?,
    );

    let mut first = Residual::new();
    let mut second = Residual::new();
    for i0 in 0..n {
        for j0 in 0..n {
            for k0 in 0..n {
                let ids = [i0, j0, k0];
                for l in 0..n {
                    // First identity, free index l (upper) and cycle over (i, j, k).
                    let mut total = 0.0;
                    for cyc in CYCLES {
                        let (i, j, k) = (ids[cyc[0]], ids[cyc[1]], ids[cyc[2]]);
                        let curv = r.get(k, l, i, j);
                        let tt: f64 = (0..n).map(|m| t_at(m, i, j) * t_at(l, m, k)).sum();
                        let grad = dt[((l * n + j) * n + k) * n + i];
                        total += curv - tt - grad;
                        first.terms(&[curv, tt, grad]);
                    }
                    first.defect(total);

                    // Second identity, free indices l (lower) and h (upper).
                    for h in 0..n {
                        let mut total = 0.0;
                        for cyc in CYCLES {
                            let (i, j, k) = (ids[cyc[0]], ids[cyc[1]], ids[cyc[2]]);
                            let grad = dr[r.idx(l, h, j, k) * n + i];
                            let rt: f64 = (0..n).map(|m| r.get(l, h, m, k) * t_at(m, i, j)).sum();
                            total += grad + rt;
                            second.terms(&[grad, rt]);
                        }
                        second.defect(total);
                    }
                }
            }
        }
    }
    Ok(BianchiResiduals { first, second })
}

/// `∇_k T^k_{ji}` at `[i n + j]` from `dt[((a n + b) n + c) n + d] = ∇_d T^a_{bc}`.
fn torsion_divergence(dt: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n).map(|k| dt[((k * n + j) * n + i) * n + k]).sum();
        }
    }
    out
}

/// `∂_i Γ^k_{jk} − ∂_j Γ^k_{ik}` at `[i n + j]`.
fn right_trace_curl(jet: &ConnJet) -> Vec<f64> {
    let n = jet.dim;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n)
                .map(|k| jet.deriv(k, j, k, i) - jet.deriv(k, i, k, j))
                .sum();
        }
    }
    out
}

/// `∂_i Γ^k_{kj} − ∂_j Γ^k_{ki}` at `[i n + j]`.
fn left_trace_curl(jet: &ConnJet) -> Vec<f64> {
    let n = jet.dim;
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n)
                .map(|k| jet.deriv(k, k, j, i) - jet.deriv(k, k, i, j))
                .sum();
        }
    }
    out
}

fn antisymmetric_gap(ric: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = ric[i * n + j] - ric[j * n + i];
        }
    }
    out
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn max_abs_derivative(jet: &ConnJet) -> f64 {
    let n = jet.dim;
    jet.data
        .iter()
        .flat_map(|j| j.d[..n].iter())
        .fold(0.0, |a, x| a.max(x.abs()))
}

/// Largest magnitude among the `∂Γ` and `ΓΓ` pieces that make up curvature
/// components; Ricci entries can cancel far below it.
pub fn curvature_term_scale(jet: &ConnJet) -> f64 {
    let g = max_abs(&jet.values());
    max_abs_derivative(jet).max(g * g)
}

/// Antisymmetric part of the Ricci tensor of a connection with torsion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RicciAntisymmetry {
    /// `R_ij − R_ji = ∇_k T^k_{ji} + ∂_i Γ^k_{jk} − ∂_j Γ^k_{ik}`.
    pub curl_form: Residual,
    /// `R_kj − R_jk + R_i^i_{jk}` against the torsion-squared terms and the
    /// cyclic torsion divergences.
    pub trace_form: Residual,
    /// When `Tr₂Γ` is closed: `R_ij − R_ji = ∇_k T^k_{ji} − (∂_i T^k_{jk} − ∂_j T^k_{ik})`.
    pub equiaffine_form: Option<Residual>,
    /// When additionally torsion-free: `R_ij = R_ji`.
    pub equiaffine_symmetry: Option<Residual>,
}

pub fn ricci_antisymmetry_residual(
    conn: &ConnectionField,
    p: &ChartPoint,
    step: f64,
) -> Result<RicciAntisymmetry, CurvatureError> {
    ensure_inside(conn, p)?;
    let n = conn.dim();
    let jet = conn.jet(p)?;
    let gamma = jet.values();
    let r = riemann_of(&jet);
    let ric = ricci_tensor(&r);
    let t_jets = torsion_jet(&jet);
    let t = values(&t_jets);
    let t_at = |a: usize, b: usize, c: usize| t[(a * n + b) * n + c];
    let dt = covariant_derivative(
        &gamma,
        n,
        &TORSION_VARIANCE,
        &t,
        &fd_partials(&torsion_field(conn), p, step)?,
    );
    let dt_at = |a: usize, b: usize, c: usize, d: usize| dt[((a * n + b) * n + c) * n + d];

    let gap = antisymmetric_gap(&ric, n);
    let div = torsion_divergence(&dt, n);
    let curl = right_trace_curl(&jet);
    let mut curl_form = Residual::of_sum(&[(1.0, &gap), (-1.0, &div), (-1.0, &curl)]);
    curl_form.terms(&ric);
    let term_scale = curvature_term_scale(&jet);
    curl_form.term(term_scale);

    let mut trace_form = Residual::new();
    for k in 0..n {
        for j in 0..n {
            let trace_r: f64 = (0..n).map(|i| r.get(i, i, j, k)).sum();
            let mut tt = 0.0;
            for i in 0..n {
                for m in 0..n {
                    tt += t_at(m, i, j) * t_at(i, m, k)
                        + t_at(m, j, k) * t_at(i, m, i)
                        + t_at(m, k, i) * t_at(i, m, j);
                }
            }
            let grads: f64 = (0..n)
                .map(|i| dt_at(i, j, k, i) + dt_at(i, k, i, j) + dt_at(i, i, j, k))
                .sum();
            let lhs = ric[k * n + j] - ric[j * n + k] + trace_r;
            trace_form.defect(lhs - tt - grads);
            trace_form.terms(&[ric[k * n + j], ric[j * n + k], trace_r, tt, grads]);
        }
    }
    trace_form.term(term_scale);

    let closed = left_trace_curl(&jet);
    let (equiaffine_form, equiaffine_symmetry) = if max_abs(&closed)
        <= ToleranceClass::Algebraic.tolerance() * max_abs_derivative(&jet).max(1.0)
    {
        let mut t_curl = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                t_curl[i * n + j] = (0..n)
                    .map(|k| t_jets[(k * n + j) * n + k].d[i] - t_jets[(k * n + i) * n + k].d[j])
                    .sum();
            }
        }
        let mut form = Residual::of_sum(&[(1.0, &gap), (-1.0, &div), (1.0, &t_curl)]);
        form.terms(&ric);
        form.term(term_scale);
        let torsion_free =
            max_abs(&t) <= ToleranceClass::Algebraic.tolerance() * max_abs(&gamma).max(1.0);
        let symmetry = torsion_free.then(|| {
            let mut s = Residual::of_sum(&[(1.0, &gap)]);
            s.terms(&ric);
            s.term(term_scale);
            s
        });
        (Some(form), symmetry)
    } else {
        (None, None)
    };

    Ok(RicciAntisymmetry {
        curl_form,
        trace_form,
        equiaffine_form,
        equiaffine_symmetry,
    })
}

/// Antisymmetric part of the α-Ricci tensor expanded through `∇`, `∇*`
/// and their torsions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaRicciAntisymmetry {
    pub expansion: Residual,
    /// Present when both connections are torsion-free with vanishing right
    /// traces to first order; then the α-Ricci tensor is symmetric.
    pub symmetry: Option<Residual>,
}

pub fn alpha_ricci_antisymmetry(
    nabla: &ConnectionField,
    star: &ConnectionField,
    alpha: f64,
    p: &ChartPoint,
    step: f64,
) -> Result<AlphaRicciAntisymmetry, CurvatureError> {
    ensure_inside(nabla, p)?;
    let n = nabla.dim();
    let (a, b) = alpha_weights(alpha);
    let jet = nabla.jet(p)?;
    let jet_star = star.jet(p)?;
    let jet_alpha = jet.combine(a, &jet_star, b);
    let gamma = jet.values();
    let gamma_star = jet_star.values();
    let ric = ricci_tensor(&riemann_of(&jet_alpha));
    let gap = antisymmetric_gap(&ric, n);

    let t = values(&torsion_jet(&jet));
    let t_star = values(&torsion_jet(&jet_star));
    let dt_partials = fd_partials(&torsion_field(nabla), p, step)?;
    let dts_partials = fd_partials(&torsion_field(star), p, step)?;
    let div = |g: &[f64], tv: &[f64], partials: &[f64]| {
        torsion_divergence(
            &covariant_derivative(g, n, &TORSION_VARIANCE, tv, partials),
            n,
        )
    };
    let d_t = div(&gamma, &t, &dt_partials);
    let ds_t = div(&gamma_star, &t, &dt_partials);
    let d_ts = div(&gamma, &t_star, &dts_partials);
    let ds_ts = div(&gamma_star, &t_star, &dts_partials);
    let curl = right_trace_curl(&jet);
    let curl_star = right_trace_curl(&jet_star);

    let mut expansion = Residual::of_sum(&[
        (1.0, &gap),
        (-a * a, &d_t),
        (-a * b, &ds_t),
        (-a * b, &d_ts),
        (-b * b, &ds_ts),
        (-a, &curl),
        (-b, &curl_star),
    ]);
    expansion.terms(&ric);
    let term_scale = curvature_term_scale(&jet).max(curvature_term_scale(&jet_star));
    expansion.term(term_scale);

    let tol = ToleranceClass::Algebraic.tolerance();
    let traceless = |j: &ConnJet| {
        let scale = max_abs(&j.values()).max(max_abs_derivative(j)).max(1.0);
        (0..n).all(|i| {
            let tr = (0..n).fold(chart_core::Jet1::ZERO, |acc, k| acc + j.at(k, i, k));
            tr.v.abs() <= tol * scale && tr.d[..n].iter().all(|d| d.abs() <= tol * scale)
        })
    };
    let torsion_free = max_abs(&t) <= tol * max_abs(&gamma).max(1.0)
        && max_abs(&t_star) <= tol * max_abs(&gamma_star).max(1.0);
    let symmetry = (torsion_free && traceless(&jet) && traceless(&jet_star)).then(|| {
        let mut s = Residual::of_sum(&[(1.0, &gap)]);
        s.terms(&ric);
        s.term(term_scale);
        s
    });
    Ok(AlphaRicciAntisymmetry {
        expansion,
        symmetry,
    })
}
