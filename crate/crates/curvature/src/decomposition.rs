//! Algebraic identity residuals built from [`PointCurvature`].
//!
//! Four-index term arrays share the curvature layout `[m][k][j][i]`, so a
//! split of `R_m^k_{ji}` is checked componentwise and its Ricci version is
//! the contraction `k = j` of every term.

use chart_core::{Residual, ToleranceClass};
use connections::BundleKind;

use crate::point::PointCurvature;
use crate::riemann::riemann_christoffel;

/// A residual tagged with the identity it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedResidual {
    pub name: &'static str,
    pub residual: Residual,
}

impl NamedResidual {
    pub fn new(name: &'static str, residual: Residual) -> Self {
        NamedResidual { name, residual }
    }
}

fn idx4(n: usize, a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * n + b) * n + c) * n + d
}

/// `Q[m][k][j][i] = K^l_{mi} K^k_{lj} − K^l_{mj} K^k_{li}`, the part of the
/// curvature of `Γ + K` that is quadratic in `K`.
pub fn quadratic_term(k: &[f64], n: usize) -> Vec<f64> {
    let kk = |a: usize, b: usize, c: usize| k[(a * n + b) * n + c];
    let mut out = vec![0.0; n.pow(4)];
    for m in 0..n {
        for kx in 0..n {
            for j in 0..n {
                for i in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += kk(l, m, i) * kk(kx, l, j) - kk(l, m, j) * kk(kx, l, i);
                    }
                    out[idx4(n, m, kx, j, i)] = s;
                }
            }
        }
    }
    out
}

/// `TK[m][k][j][i] = T^l_{ji} K^k_{ml}`.
pub fn torsion_term(t: &[f64], k: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n.pow(4)];
    for m in 0..n {
        for kx in 0..n {
            for j in 0..n {
                for i in 0..n {
                    out[idx4(n, m, kx, j, i)] = (0..n)
                        .map(|l| t[(l * n + j) * n + i] * k[(kx * n + m) * n + l])
                        .sum();
                }
            }
        }
    }
    out
}

/// `D[m][k][j][i] = K^k_{mi|j} − K^k_{mj|i}` from `dk[a][b][c][d] = ∇_d K^a_{bc}`.
pub fn derivative_term(dk: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n.pow(4)];
    for m in 0..n {
        for kx in 0..n {
            for j in 0..n {
                for i in 0..n {
                    out[idx4(n, m, kx, j, i)] = dk[idx4(n, kx, m, i, j)] - dk[idx4(n, kx, m, j, i)];
                }
            }
        }
    }
    out
}

/// Contraction `A[m][i] = Σ_j A[m][j][j][i]` of a four-index array.
pub fn contract(a: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for m in 0..n {
        for i in 0..n {
            out[m * n + i] = (0..n).map(|j| a[idx4(n, m, j, j, i)]).sum();
        }
    }
    out
}

fn antisymmetric(t: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = 0.5 * (t[i * n + j] - t[j * n + i]);
        }
    }
    out
}

fn symmetric(t: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = 0.5 * (t[i * n + j] + t[j * n + i]);
        }
    }
    out
}

fn trace(g_inv: &[f64], t: &[f64]) -> f64 {
    g_inv.iter().zip(t).map(|(a, b)| a * b).sum()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Term arrays entering the curvature splits.
struct SplitTerms {
    r: Vec<f64>,
    r_star: Vec<f64>,
    r_avg: Vec<f64>,
    quad: Vec<f64>,
    deriv: Vec<f64>,
    deriv_avg: Vec<f64>,
    tors: Vec<f64>,
    tors_avg: Vec<f64>,
}

impl SplitTerms {
    fn new(pc: &PointCurvature, torsion: &[f64], torsion_avg: &[f64]) -> Self {
        let n = pc.dim;
        SplitTerms {
            r: pc.r.data().to_vec(),
            r_star: pc.r_star.data().to_vec(),
            r_avg: pc.r_avg.data().to_vec(),
            quad: quadratic_term(&pc.k, n),
            deriv: derivative_term(&pc.dk, n),
            deriv_avg: derivative_term(&pc.dk_avg, n),
            tors: torsion_term(torsion, &pc.k, n),
            tors_avg: torsion_term(torsion_avg, &pc.k, n),
        }
    }

    fn contracted(&self, n: usize) -> SplitTerms {
        SplitTerms {
            r: contract(&self.r, n),
            r_star: contract(&self.r_star, n),
            r_avg: contract(&self.r_avg, n),
            quad: contract(&self.quad, n),
            deriv: contract(&self.deriv, n),
            deriv_avg: contract(&self.deriv_avg, n),
            tors: contract(&self.tors, n),
            tors_avg: contract(&self.tors_avg, n),
        }
    }

    /// The seven distinct splits as `Σ coeff · term = 0`. The sum identity
    /// has no separate `∇`-based form.
    fn residuals(&self) -> [Residual; 7] {
        let s = self;
        [
            Residual::of_sum(&[
                (1.0, &s.r),
                (-1.0, &s.r_avg),
                (0.5, &s.deriv_avg),
                (-0.25, &s.quad),
                (0.5, &s.tors_avg),
            ]),
            Residual::of_sum(&[
                (1.0, &s.r),
                (-1.0, &s.r_avg),
                (0.5, &s.deriv),
                (0.25, &s.quad),
                (0.5, &s.tors),
            ]),
            Residual::of_sum(&[
                (1.0, &s.r_star),
                (-1.0, &s.r_avg),
                (-0.5, &s.deriv_avg),
                (-0.25, &s.quad),
                (-0.5, &s.tors_avg),
            ]),
            Residual::of_sum(&[
                (1.0, &s.r_star),
                (-1.0, &s.r_avg),
                (-0.5, &s.deriv),
                (-0.75, &s.quad),
                (-0.5, &s.tors),
            ]),
            Residual::of_sum(&[
                (1.0, &s.r),
                (-1.0, &s.r_star),
                (1.0, &s.deriv_avg),
                (1.0, &s.tors_avg),
            ]),
            Residual::of_sum(&[
                (1.0, &s.r),
                (-1.0, &s.r_star),
                (1.0, &s.deriv),
                (1.0, &s.quad),
                (1.0, &s.tors),
            ]),
            Residual::of_sum(&[
                (1.0, &s.r),
                (1.0, &s.r_star),
                (-2.0, &s.r_avg),
                (-0.5, &s.quad),
            ]),
        ]
    }
}

const CURVATURE_SPLITS: [&str; 7] = [
    "curvature_split_average_form",
    "curvature_split_nabla_form",
    "dual_curvature_split_average_form",
    "dual_curvature_split_nabla_form",
    "curvature_difference_average_form",
    "curvature_difference_nabla_form",
    "curvature_sum_split",
];

const RICCI_SPLITS: [&str; 7] = [
    "ricci_split_average_form",
    "ricci_split_nabla_form",
    "dual_ricci_split_average_form",
    "dual_ricci_split_nabla_form",
    "ricci_difference_average_form",
    "ricci_difference_nabla_form",
    "ricci_sum_split",
];

/// `g(R(X,Y)Z,W) + g(R*(X,Y)W,Z)` over all index quadruples.
pub fn duality_curvature_residual(pc: &PointCurvature) -> Residual {
    let rc = riemann_christoffel(&pc.g, &pc.r);
    let rc_star = riemann_christoffel(&pc.g, &pc.r_star);
    let n = pc.dim;
    let mut swapped = vec![0.0; n.pow(4)];
    for w in 0..n {
        for z in 0..n {
            for x in 0..n {
                for y in 0..n {
                    swapped[idx4(n, w, z, x, y)] = rc_star[idx4(n, z, w, x, y)];
                }
            }
        }
    }
    Residual::of_sum(&[(1.0, &rc), (1.0, &swapped)])
}

/// `R(X,Y,Z,V) + R(X,Y,V,Z)` for a lowered curvature array.
pub fn last_pair_residual(rc: &[f64], n: usize) -> Residual {
    Residual::of_sum(&[(1.0, rc), (1.0, &transpose_pairs(rc, n, false))])
}

/// `R(X,Y,Z,V) + R(Y,X,Z,V)` for a lowered curvature array.
pub fn first_pair_residual(rc: &[f64], n: usize) -> Residual {
    Residual::of_sum(&[(1.0, rc), (1.0, &transpose_pairs(rc, n, true))])
}

fn transpose_pairs(rc: &[f64], n: usize, first: bool) -> Vec<f64> {
    let mut out = vec![0.0; n.pow(4)];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    out[idx4(n, a, b, c, d)] = if first {
                        rc[idx4(n, b, a, c, d)]
                    } else {
                        rc[idx4(n, a, b, d, c)]
                    };
                }
            }
        }
    }
    out
}

/// Adds the `∂Γ`/`ΓΓ` magnitude to every scale, so that curvature which
/// cancels to rounding level is not compared against its own noise.
fn with_term_scale(pc: &PointCurvature, mut out: Vec<NamedResidual>) -> Vec<NamedResidual> {
    let scale = pc.term_scale();
    for nr in &mut out {
        nr.residual.term(scale);
    }
    out
}

/// The seven curvature-level splits through `R⁽⁰⁾`, `∇K` and `∇⁽⁰⁾K`.
pub fn decomposition_residuals(pc: &PointCurvature) -> Vec<NamedResidual> {
    let terms = SplitTerms::new(pc, &pc.torsion, &pc.torsion_avg);
    let out = CURVATURE_SPLITS
        .iter()
        .zip(terms.residuals())
        .map(|(name, r)| NamedResidual::new(name, r))
        .collect();
    with_term_scale(pc, out)
}

/// Ricci-level splits, their symmetric and antisymmetric parts, and the
/// right-traceless simplifications when `Tr₁K` and `∇⁽⁰⁾Tr₁K` vanish.
pub fn ricci_decomposition_residuals(pc: &PointCurvature) -> Vec<NamedResidual> {
    let n = pc.dim;
    let terms = SplitTerms::new(pc, &pc.torsion, &pc.torsion_avg).contracted(n);
    let mut out: Vec<NamedResidual> = RICCI_SPLITS
        .iter()
        .zip(terms.residuals())
        .map(|(name, r)| NamedResidual::new(name, r))
        .collect();

    // Symmetric and antisymmetric parts of the average-form splits of R and R*.
    let parts = |lhs: &[f64], sign: f64| {
        let mut anti = Residual::new();
        let mut sym = Residual::new();
        let pieces: [(f64, &[f64]); 5] = [
            (1.0, lhs),
            (-1.0, &terms.r_avg),
            (0.5 * sign, &terms.deriv_avg),
            (-0.25, &terms.quad),
            (0.5 * sign, &terms.tors_avg),
        ];
        let a: Vec<Vec<f64>> = pieces.iter().map(|(_, t)| antisymmetric(t, n)).collect();
        let s: Vec<Vec<f64>> = pieces.iter().map(|(_, t)| symmetric(t, n)).collect();
        let coeffs: Vec<f64> = pieces.iter().map(|(c, _)| *c).collect();
        anti.add_sum(&zip_terms(&coeffs, &a));
        sym.add_sum(&zip_terms(&coeffs, &s));
        // The parts may cancel to rounding level, so the unsplit terms set
        // the scale.
        for (c, t) in &pieces {
            let scaled: Vec<f64> = t.iter().map(|x| c * x).collect();
            anti.terms(&scaled);
            sym.terms(&scaled);
        }
        (anti, sym)
    };
    let (anti, sym) = parts(&terms.r, 1.0);
    let (anti_star, sym_star) = parts(&terms.r_star, -1.0);
    out.push(NamedResidual::new("ricci_antisymmetric_part", anti));
    out.push(NamedResidual::new(
        "dual_ricci_antisymmetric_part",
        anti_star,
    ));
    out.push(NamedResidual::new("ricci_symmetric_part", sym));
    out.push(NamedResidual::new("dual_ricci_symmetric_part", sym_star));

    if let Some(traceless) = right_traceless_terms(pc) {
        let mut r = Residual::new();
        r.add_sum(&[
            (1.0, &terms.r),
            (-1.0, &terms.r_avg),
            (0.5, &traceless.divergence),
            (0.25, &traceless.quad_rest),
            (0.5, &terms.tors_avg),
        ]);
        r.add_sum(&[
            (1.0, &terms.r_star),
            (-1.0, &terms.r_avg),
            (-0.5, &traceless.divergence),
            (0.25, &traceless.quad_rest),
            (-0.5, &terms.tors_avg),
        ]);
        out.push(NamedResidual::new("ricci_split_right_traceless", r));
        if traceless.divergence_free {
            let mut r = Residual::new();
            r.add_sum(&[
                (1.0, &terms.r),
                (-1.0, &terms.r_avg),
                (0.25, &traceless.quad_rest),
                (0.5, &terms.tors_avg),
            ]);
            r.add_sum(&[
                (1.0, &terms.r_star),
                (-1.0, &terms.r_avg),
                (0.25, &traceless.quad_rest),
                (-0.5, &terms.tors_avg),
            ]);
            out.push(NamedResidual::new(
                "ricci_split_right_traceless_divergence_free",
                r,
            ));
        }
    }
    with_term_scale(pc, out)
}

fn zip_terms<'a>(coeffs: &[f64], arrays: &'a [Vec<f64>]) -> Vec<(f64, &'a [f64])> {
    coeffs
        .iter()
        .zip(arrays)
        .map(|(c, a)| (*c, a.as_slice()))
        .collect()
}

/// Contracted pieces that survive when the right trace of `K` vanishes.
struct RightTraceless {
    /// `Div⁽⁰⁾K_mi = Σ_j ∇⁽⁰⁾_j K^j_{mi}`.
    divergence: Vec<f64>,
    /// `K^l_{mj} K^j_{li}`, the contracted quadratic without its trace part.
    quad_rest: Vec<f64>,
    divergence_free: bool,
}

/// `∇⁽⁰⁾_i Tr₁(K)_m = Σ_j ∇⁽⁰⁾_i K^j_{mj}` at `[m n + i]`.
pub fn average_gradient_of_right_trace(pc: &PointCurvature) -> Vec<f64> {
    let n = pc.dim;
    let mut out = vec![0.0; n * n];
    for m in 0..n {
        for i in 0..n {
            out[m * n + i] = (0..n).map(|j| pc.dk_avg[idx4(n, j, m, j, i)]).sum();
        }
    }
    out
}

/// `Div⁽⁰⁾K_mi = Σ_j ∇⁽⁰⁾_j K^j_{mi}` at `[m n + i]`.
pub fn average_divergence(pc: &PointCurvature) -> Vec<f64> {
    let n = pc.dim;
    let mut out = vec![0.0; n * n];
    for m in 0..n {
        for i in 0..n {
            out[m * n + i] = (0..n).map(|j| pc.dk_avg[idx4(n, j, m, i, j)]).sum();
        }
    }
    out
}

/// Whether a quantity is zero at the algebraic tolerance against `scale`.
fn negligible(values: &[f64], scale: f64) -> bool {
    max_abs(values) <= ToleranceClass::Algebraic.tolerance() * scale.max(1.0)
}

fn right_traceless_terms(pc: &PointCurvature) -> Option<RightTraceless> {
    let n = pc.dim;
    let grad = average_gradient_of_right_trace(pc);
    if !negligible(&pc.trace_right(), max_abs(&pc.k)) || !negligible(&grad, max_abs(&pc.dk_avg)) {
        return None;
    }
    let divergence = average_divergence(pc);
    let mut quad_rest = vec![0.0; n * n];
    for m in 0..n {
        for i in 0..n {
            let mut s = 0.0;
            for l in 0..n {
                for j in 0..n {
                    s += pc.k(l, m, j) * pc.k(j, l, i);
                }
            }
            quad_rest[m * n + i] = s;
        }
    }
    let divergence_free = negligible(&divergence, max_abs(&pc.dk_avg));
    Some(RightTraceless {
        divergence,
        quad_rest,
        divergence_free,
    })
}

/// The splits with torsion terms specialised to the bundle kind: both
/// torsions dropped on statistical bundles, and on quasi-statistical ones
/// `T = 0` with `T⁽⁰⁾ = ½T*`. Curvature and Ricci levels are merged
/// separately. Other kinds yield nothing.
pub fn specialized_residuals(pc: &PointCurvature, kind: BundleKind) -> Vec<NamedResidual> {
    let n = pc.dim;
    let zero = vec![0.0; n * n * n];
    let half_star: Vec<f64> = pc.torsion_star.iter().map(|t| 0.5 * t).collect();
    let (label_curv, label_ricci, t_avg) = match kind {
        BundleKind::Statistical => (
            "statistical_curvature_splits",
            "statistical_ricci_splits",
            &zero,
        ),
        BundleKind::QuasiStatistical => (
            "quasi_statistical_curvature_splits",
            "quasi_statistical_ricci_splits",
            &half_star,
        ),
        _ => return Vec::new(),
    };
    let terms = SplitTerms::new(pc, &zero, t_avg);
    let merge = |rs: [Residual; 7]| rs.into_iter().fold(Residual::new(), |acc, r| acc.merged(r));
    with_term_scale(
        pc,
        vec![
            NamedResidual::new(label_curv, merge(terms.residuals())),
            NamedResidual::new(label_ricci, merge(terms.contracted(n).residuals())),
        ],
    )
}

/// Statistical-only consequences: the Ricci antisymmetry through
/// `∇⁽⁰⁾Tr₁K`, the scalar gap `R − R*`, and Ricci symmetry when `Tr₂K`
/// vanishes to first order.
pub fn statistical_residuals(pc: &PointCurvature) -> Vec<NamedResidual> {
    let n = pc.dim;
    let grad = average_gradient_of_right_trace(pc);
    let grad_anti = antisymmetric(&grad, n);
    let ric_anti = antisymmetric(&pc.ric.tensor, n);
    let ric_star_anti = antisymmetric(&pc.ric_star.tensor, n);
    let mut anti = Residual::of_sum(&[(1.0, &ric_anti), (-0.5, &grad_anti)]);
    anti.add_sum(&[(1.0, &ric_star_anti), (0.5, &grad_anti)]);
    anti.terms(&pc.ric.tensor);
    anti.terms(&pc.ric_star.tensor);

    let terms = SplitTerms::new(pc, &pc.torsion, &pc.torsion_avg).contracted(n);
    let gap = pc.ric.scalar - pc.ric_star.scalar;
    let avg_form = trace(&pc.g_inv, &terms.deriv_avg);
    let nabla_form = trace(&pc.g_inv, &terms.deriv) + trace(&pc.g_inv, &terms.quad);
    let mut scalar = Residual::of_sum(&[(1.0, &[gap]), (1.0, &[avg_form])]);
    scalar.add_sum(&[(1.0, &[gap]), (1.0, &[nabla_form])]);
    scalar.terms(&[pc.ric.scalar, pc.ric_star.scalar]);

    let mut out = vec![
        NamedResidual::new("statistical_ricci_antisymmetry", anti),
        NamedResidual::new("statistical_scalar_gap", scalar),
    ];

    let left = pc.trace_left();
    let left_grad: Vec<f64> = (0..n)
        .flat_map(|c| {
            let pc = &pc;
            (0..n).map(move |axis| {
                (0..n)
                    .map(|a| pc.k_jets[(a * n + a) * n + c].d[axis])
                    .sum::<f64>()
            })
        })
        .collect();
    let k_grad_scale = pc
        .k_jets
        .iter()
        .flat_map(|j| j.d[..n].iter())
        .fold(0.0_f64, |a, x| a.max(x.abs()));
    if negligible(&left, max_abs(&pc.k)) && negligible(&left_grad, k_grad_scale) {
        let mut sym = Residual::of_sum(&[(1.0, &ric_anti)]);
        sym.add_sum(&[(1.0, &ric_star_anti)]);
        sym.terms(&pc.ric.tensor);
        sym.terms(&pc.ric_star.tensor);
        out.push(NamedResidual::new("left_traceless_ricci_symmetry", sym));
    }
    with_term_scale(pc, out)
}

/// Residuals that hold for every dual pair: curvature duality, the
/// last-pair antisymmetry of `R`, `R*` and their lowered forms, the
/// first-pair antisymmetry of the metric average curvature, and the
/// first-pair antisymmetry of `R` and `R*` whenever they coincide.
pub fn universal_residuals(pc: &PointCurvature) -> Vec<NamedResidual> {
    let n = pc.dim;
    let rc = riemann_christoffel(&pc.g, &pc.r);
    let rc_star = riemann_christoffel(&pc.g, &pc.r_star);
    let rc_avg = riemann_christoffel(&pc.g, &pc.r_avg);
    let mut last = last_pair_residual(pc.r.data(), n)
        .merged(last_pair_residual(pc.r_star.data(), n))
        .merged(last_pair_residual(&rc, n))
        .merged(last_pair_residual(&rc_star, n));
    last.terms(&rc);
    let mut out = vec![
        NamedResidual::new("curvature_duality", duality_curvature_residual(pc)),
        NamedResidual::new("curvature_last_pair_antisymmetry", last),
        NamedResidual::new(
            "average_curvature_first_pair_antisymmetry",
            first_pair_residual(&rc_avg, n),
        ),
    ];
    let mut gap = Residual::of_sum(&[(1.0, pc.r.data()), (-1.0, pc.r_star.data())]);
    gap.term(pc.term_scale());
    if gap.passes(ToleranceClass::Algebraic) {
        out.push(NamedResidual::new(
            "conjugate_symmetric_first_pair_antisymmetry",
            first_pair_residual(&rc, n).merged(first_pair_residual(&rc_star, n)),
        ));
    }
    with_term_scale(pc, out)
}
