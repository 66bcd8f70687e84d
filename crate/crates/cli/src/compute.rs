use chart_core::{axis_step, default_base_step, ChartError, ChartPoint};
use clap::ValueEnum;
use connections::{torsion_jet, values, GeometryBundle};
use curvature::{alpha_ricci_direct, alpha_riemann_direct, PointCurvature};
use einstein::{einstein_of, h_tensor_of, EinsteinSource};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::{sig9, to_columns, to_csv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TensorName {
    #[value(name = "riemann")]
    Riemann,
    #[value(name = "ricci")]
    Ricci,
    #[value(name = "scalar")]
    Scalar,
    #[value(name = "einstein")]
    Einstein,
    #[value(name = "alpha_einstein")]
    AlphaEinstein,
    #[value(name = "K")]
    K,
    #[value(name = "C")]
    C,
    #[value(name = "T")]
    T,
    #[value(name = "T_star")]
    TStar,
    #[value(name = "H")]
    H,
}

impl TensorName {
    pub fn label(self) -> &'static str {
        match self {
            TensorName::Riemann => "riemann",
            TensorName::Ricci => "ricci",
            TensorName::Scalar => "scalar",
            TensorName::Einstein => "einstein",
            TensorName::AlphaEinstein => "alpha_einstein",
            TensorName::K => "K",
            TensorName::C => "C",
            TensorName::T => "T",
            TensorName::TStar => "T_star",
            TensorName::H => "H",
        }
    }

    pub fn rank(self) -> usize {
        match self {
            TensorName::Scalar => 0,
            TensorName::Ricci
            | TensorName::Einstein
            | TensorName::AlphaEinstein
            | TensorName::H => 2,
            TensorName::K | TensorName::C | TensorName::T | TensorName::TStar => 3,
            TensorName::Riemann => 4,
        }
    }

    /// How the flat component array is indexed.
    pub fn layout(self) -> &'static str {
        match self {
            TensorName::Riemann => "[m][k][j][i] = R_m^k_{ji}, R(∂_j,∂_i)∂_m = R_m^k_{ji} ∂_k",
            TensorName::Ricci => "[m][i] = R_m^j_{ji}",
            TensorName::Scalar => "g^{mi} R_mi",
            TensorName::Einstein | TensorName::AlphaEinstein => "[i][j] = R_(ij) − ½ g_ij R",
            TensorName::K => "[a][b][c] = K^a_{bc} = Γ*^a_{bc} − Γ^a_{bc}",
            TensorName::C => "[k][i][j] = (∇_k g)_ij",
            TensorName::T | TensorName::TStar => "[i][k][l] = T^i_{kl} = Γ^i_{lk} − Γ^i_{kl}",
            TensorName::H => "[i][j] = 𝒦_(ij) − ½ g_ij 𝒦",
        }
    }

    /// Tensors that depend on α when one is given.
    fn takes_alpha(self) -> bool {
        matches!(
            self,
            TensorName::Riemann
                | TensorName::Ricci
                | TensorName::Scalar
                | TensorName::AlphaEinstein
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub index: Vec<usize>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComputeOutput {
    pub manifold: String,
    pub tensor: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    pub point: Vec<f64>,
    pub dim: usize,
    pub layout: String,
    pub components: Vec<Component>,
}

/// Resolves the α argument: required for `alpha_einstein`, rejected for
/// tensors that do not depend on it.
pub fn check_alpha(tensor: TensorName, alpha: Option<f64>) -> Result<Option<f64>, CliError> {
    match (tensor, alpha) {
        (TensorName::AlphaEinstein, None) => {
            Err(CliError::Usage("alpha_einstein requires --alpha".into()))
        }
        (t, Some(_)) if !t.takes_alpha() => Err(CliError::Usage(format!(
            "--alpha does not apply to {}",
            t.label()
        ))),
        (_, Some(a)) if !a.is_finite() => {
            Err(CliError::Usage(format!("--alpha {a} is not finite")))
        }
        (_, a) => Ok(a),
    }
}

/// Rejects points whose default finite-difference stencil leaves the
/// domain, naming the first offending stencil point.
pub fn check_point(bundle: &GeometryBundle, coords: &[f64]) -> Result<ChartPoint, CliError> {
    let n = bundle.dim();
    if coords.len() != n {
        return Err(CliError::Usage(format!(
            "point has {} coordinates, manifold dimension is {n}",
            coords.len()
        )));
    }
    let p = ChartPoint::new(coords.to_vec())?;
    if !bundle.domain.contains(coords) {
        return Err(ChartError::OutsideDomain {
            point: coords.to_vec(),
        }
        .into());
    }
    let base = default_base_step();
    for (axis, &x) in coords.iter().enumerate() {
        let step = axis_step(base, x);
        for sign in [1.0, -1.0] {
            let q = p.shifted(axis, sign * step);
            if !bundle.domain.contains(q.coords()) {
                return Err(ChartError::DomainEscape {
                    stencil: q.coords().to_vec(),
                    axis,
                    step,
                }
                .into());
            }
        }
    }
    Ok(p)
}

/// Components of `tensor` at `p` in the layout of [`TensorName::layout`].
pub fn tensor_values(
    bundle: &GeometryBundle,
    tensor: TensorName,
    alpha: Option<f64>,
    p: &ChartPoint,
) -> Result<Vec<f64>, CliError> {
    let pc = PointCurvature::at(bundle, p)?;
    Ok(match (tensor, alpha) {
        (TensorName::Riemann, None) => pc.r.data().to_vec(),
        (TensorName::Riemann, Some(a)) => alpha_riemann_direct(&pc, a).data().to_vec(),
        (TensorName::Ricci, None) => pc.ric.tensor.clone(),
        (TensorName::Ricci, Some(a)) => alpha_ricci_direct(&pc, a).tensor,
        (TensorName::Scalar, None) => vec![pc.ric.scalar],
        (TensorName::Scalar, Some(a)) => vec![alpha_ricci_direct(&pc, a).scalar],
        (TensorName::Einstein, _) => einstein_of(&pc, EinsteinSource::Nabla).tensor,
        (TensorName::AlphaEinstein, a) => {
            einstein_of(&pc, EinsteinSource::Alpha(a.unwrap_or(1.0))).tensor
        }
        (TensorName::K, _) => pc.k.clone(),
        (TensorName::C, _) => values(&pc.jets.cubic()),
        (TensorName::T, _) => values(&torsion_jet(&pc.jets.nabla)),
        (TensorName::TStar, _) => values(&torsion_jet(&pc.jets.star)),
        (TensorName::H, _) => h_tensor_of(&pc),
    })
}

/// Multi-indices of a rank-`rank` tensor in row-major order.
fn indices(dim: usize, rank: usize) -> Vec<Vec<usize>> {
    let total = dim.pow(rank as u32);
    (0..total)
        .map(|mut flat| {
            let mut idx = vec![0; rank];
            for slot in (0..rank).rev() {
                idx[slot] = flat % dim;
                flat /= dim;
            }
            idx
        })
        .collect()
}

pub fn compute(
    bundle: &GeometryBundle,
    tensor: TensorName,
    alpha: Option<f64>,
    coords: &[f64],
) -> Result<ComputeOutput, CliError> {
    let alpha = check_alpha(tensor, alpha)?;
    let p = check_point(bundle, coords)?;
    let data = tensor_values(bundle, tensor, alpha, &p)?;
    let components = indices(bundle.dim(), tensor.rank())
        .into_iter()
        .zip(data)
        .map(|(index, value)| Component { index, value })
        .collect();
    Ok(ComputeOutput {
        manifold: bundle.name.clone(),
        tensor: tensor.label().to_string(),
        alpha,
        point: coords.to_vec(),
        dim: bundle.dim(),
        layout: tensor.layout().to_string(),
        components,
    })
}

/// One grid axis, `lo:hi:count`.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Axis {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("grid axis '{spec}' must be lo:hi:count"));
        let parts: Vec<&str> = spec.split(':').collect();
        let [lo, hi, count] = parts.as_slice() else {
            return Err(bad());
        };
        let axis = Axis {
            lo: lo.trim().parse().map_err(|_| bad())?,
            hi: hi.trim().parse().map_err(|_| bad())?,
            count: count.trim().parse().map_err(|_| bad())?,
        };
        if axis.count == 0 || !axis.lo.is_finite() || !axis.hi.is_finite() || axis.hi < axis.lo {
            return Err(bad());
        }
        Ok(axis)
    }

    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.lo];
        }
        let span = self.hi - self.lo;
        (0..self.count)
            .map(|k| self.lo + span * k as f64 / (self.count - 1) as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        to_csv(&self.header, &self.rows)
    }

    pub fn to_text(&self) -> String {
        to_columns(&self.header, &self.rows)
    }
}

/// Tensor components over a tensor-product grid. Rows run over grid points
/// with the first axis slowest, then over component indices.
pub fn table(
    bundle: &GeometryBundle,
    tensor: TensorName,
    alpha: Option<f64>,
    axes: &[Axis],
) -> Result<Table, CliError> {
    let n = bundle.dim();
    if axes.len() != n {
        return Err(CliError::Usage(format!(
            "{} grid axes given, manifold dimension is {n}",
            axes.len()
        )));
    }
    let alpha = check_alpha(tensor, alpha)?;
    let rank = tensor.rank();
    let mut header: Vec<String> = (1..=n).map(|a| format!("x{a}")).collect();
    header.extend((1..=rank).map(|s| format!("i{s}")));
    header.push("value".into());

    let axis_values: Vec<Vec<f64>> = axes.iter().map(Axis::values).collect();
    let grid = indices_product(&axis_values);
    let labels = indices(n, rank);
    let mut rows = Vec::new();
    for coords in grid {
        let p = check_point(bundle, &coords)?;
        let data = tensor_values(bundle, tensor, alpha, &p)?;
        for (idx, value) in labels.iter().zip(data) {
            let mut row: Vec<String> = coords.iter().map(|x| sig9(*x)).collect();
            row.extend(idx.iter().map(usize::to_string));
            row.push(sig9(value));
            rows.push(row);
        }
    }
    Ok(Table { header, rows })
}

fn indices_product(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, values| {
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(*v);
                    next
                })
            })
            .collect()
    })
}
