//! JSON manifold specifications (schema version 1).

use std::collections::BTreeMap;
use std::sync::Arc;

use chart_core::{halton_points, Domain, Jet1, MetricAtPoint, SmoothField};
use connections::{statistical_pair_from_cubic, BundleKind, CubicMode, GeometryBundle};
use serde::Deserialize;

use crate::builtin::{
    cubic_field, diagonal_cosmo_linear, euclidean, gaussian_family, metric_field, sphere,
};
use crate::error::ZooError;
use crate::polynomial::Polynomial;
use crate::random::random_bundle;

/// Names accepted for built-in geometries. Parameters may follow a colon,
/// as in `sphere:2.0`, `euclidean:3` or `random_statistical:3:42`.
pub const BUILTIN_NAMES: [&str; 8] = [
    "gaussian_family",
    "sphere",
    "euclidean",
    "diagonal_cosmo",
    "random_statistical",
    "random_quasi_statistical",
    "random_general",
    "random_pre_statistical",
];

const VALIDATION_POINTS: usize = 50;

type Terms = BTreeMap<String, f64>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    version: Option<u32>,
    name: Option<String>,
    radius: Option<f64>,
    dim: Option<usize>,
    domain: Option<Vec<[f64; 2]>>,
    metric: Option<RawMetric>,
    cubic: Option<RawCubic>,
    seed: Option<u64>,
    nabla_star_perturbation: Option<RawTensorTerms>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawMetric {
    Polynomial { terms: BTreeMap<String, Terms> },
    Diag { entries: Vec<RawPoly> },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawPoly {
    Number(f64),
    Terms(Terms),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTensorTerms {
    terms: BTreeMap<String, Terms>,
    mode: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawCubic {
    Named(String),
    Terms(RawTensorTerms),
}

fn parse_digits(
    key: &str,
    what: &str,
    len: usize,
    one_based: bool,
) -> Result<Vec<usize>, ZooError> {
    let parts: Vec<&str> = if key.contains(',') {
        key.split(',').map(str::trim).collect()
    } else {
        key.char_indices()
            .map(|(i, c)| &key[i..i + c.len_utf8()])
            .collect()
    };
    let bad = || {
        ZooError::validation(
            "descriptor syntax",
            format!("{what} key '{key}' must have {len} entries"),
        )
    };
    if parts.len() != len {
        return Err(bad());
    }
    parts
        .iter()
        .map(|s| {
            let v: usize = s.parse().map_err(|_| bad())?;
            if one_based {
                // The upper bound depends on the dimension and is checked
                // by the caller.
                v.checked_sub(1).ok_or_else(bad)
            } else {
                Ok(v)
            }
        })
        .collect()
}

fn component_key(key: &str, rank: usize, dim: usize) -> Result<Vec<usize>, ZooError> {
    let idx = parse_digits(key, "component", rank, true)?;
    if idx.iter().any(|&i| i >= dim) {
        return Err(ZooError::validation(
            "descriptor syntax",
            format!("component key '{key}' exceeds dimension {dim}"),
        ));
    }
    Ok(idx)
}

fn polynomial(terms: &Terms, dim: usize) -> Result<Polynomial, ZooError> {
    let mut out = Polynomial::zero();
    for (key, c) in terms {
        let exps = parse_digits(key, "exponent", dim, false)?;
        if !c.is_finite() {
            return Err(ZooError::validation(
                "descriptor syntax",
                format!("coefficient for '{key}' is not finite"),
            ));
        }
        out.terms
            .push((exps.into_iter().map(|e| e as u32).collect(), *c));
    }
    Ok(out)
}

fn tensor_polys(
    terms: &BTreeMap<String, Terms>,
    rank: usize,
    dim: usize,
) -> Result<Vec<Option<Polynomial>>, ZooError> {
    let mut out = vec![None; dim.pow(rank as u32)];
    for (key, t) in terms {
        let idx = component_key(key, rank, dim)?;
        let o = idx.iter().fold(0, |acc, i| acc * dim + i);
        out[o] = Some(polynomial(t, dim)?);
    }
    Ok(out)
}

fn metric_from_raw(raw: &RawMetric, domain: Domain) -> Result<SmoothField, ZooError> {
    let n = domain.dim();
    let comps: Vec<Polynomial> = match raw {
        RawMetric::Diag { entries } => {
            if entries.len() != n {
                return Err(ZooError::validation(
                    "dimension",
                    format!("diag metric has {} entries for dim {n}", entries.len()),
                ));
            }
            let mut out = vec![Polynomial::zero(); n * n];
            for (i, e) in entries.iter().enumerate() {
                out[i * n + i] = match e {
                    RawPoly::Number(c) => Polynomial::constant(n, *c),
                    RawPoly::Terms(t) => polynomial(t, n)?,
                };
            }
            out
        }
        RawMetric::Polynomial { terms } => {
            let given = tensor_polys(terms, 2, n)?;
            let mut out = vec![Polynomial::zero(); n * n];
            for i in 0..n {
                for j in 0..n {
                    let (a, b) = (&given[i * n + j], &given[j * n + i]);
                    if let (Some(a), Some(b)) = (a, b) {
                        if a != b && i != j {
                            return Err(ZooError::validation(
                                "metric symmetry",
                                format!(
                                    "components {}{} and {}{} differ",
                                    i + 1,
                                    j + 1,
                                    j + 1,
                                    i + 1
                                ),
                            ));
                        }
                    }
                    out[i * n + j] = a
                        .clone()
                        .or_else(|| b.clone())
                        .unwrap_or_else(Polynomial::zero);
                }
            }
            out
        }
    };
    let comps = Arc::new(comps);
    Ok(metric_field(domain, move |x| {
        comps.iter().map(|p| p.eval(x)).collect()
    }))
}

fn validate_metric(g: &SmoothField) -> Result<(), ZooError> {
    for p in halton_points(g.domain(), VALIDATION_POINTS, 0, 0.0) {
        let v = g
            .values(&p)
            .map_err(|e| ZooError::validation("metric finite", e.to_string()))?;
        MetricAtPoint::from_components(v).map_err(|e| {
            ZooError::validation("metric invertible", format!("{e} at {:?}", p.coords()))
        })?;
    }
    Ok(())
}

fn cubic_symmetry(c: &SmoothField) -> Result<bool, ZooError> {
    let n = c.dim();
    let mut total = true;
    for p in halton_points(c.domain(), VALIDATION_POINTS, 0, 0.0) {
        let v = c.values(&p)?;
        let scale = v.max_abs();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let gap = (v.get(&[k, i, j]) - v.get(&[k, j, i])).abs();
                    if gap > 1e-12 * scale {
                        return Err(ZooError::validation(
                            "cubic last-two symmetry",
                            format!(
                                "C[{}][{}][{}] - C[{}][{}][{}] = {gap:e} at {:?}",
                                k + 1,
                                i + 1,
                                j + 1,
                                k + 1,
                                j + 1,
                                i + 1,
                                p.coords()
                            ),
                        ));
                    }
                    if (v.get(&[k, i, j]) - v.get(&[i, k, j])).abs() > 1e-12 * scale {
                        total = false;
                    }
                }
            }
        }
    }
    Ok(total)
}

/// Built-in geometry by name with optional colon-separated parameters.
pub fn builtin_by_name(spec: &str) -> Result<GeometryBundle, ZooError> {
    let mut parts = spec.split(':');
    let name = parts.next().unwrap_or_default();
    let args: Vec<&str> = parts.collect();
    let num = |i: usize, default: f64| -> Result<f64, ZooError> {
        args.get(i).map_or(Ok(default), |s| {
            s.parse().map_err(|_| {
                ZooError::validation("builtin parameter", format!("'{s}' is not a number"))
            })
        })
    };
    let dim = |i: usize, default: usize| -> Result<usize, ZooError> {
        Ok(num(i, default as f64)? as usize)
    };
    let random = |kind: BundleKind| -> Result<GeometryBundle, ZooError> {
        random_bundle(kind, dim(0, 3)?, num(1, 42.0)? as u64)
    };
    match name {
        "gaussian_family" => gaussian_family(),
        "sphere" => sphere(num(0, 1.0)?),
        "euclidean" => euclidean(dim(0, 3)?),
        "diagonal_cosmo" => diagonal_cosmo_linear(),
        "random_statistical" => random(BundleKind::Statistical),
        "random_quasi_statistical" => random(BundleKind::QuasiStatistical),
        "random_general" => random(BundleKind::General),
        "random_pre_statistical" => random(BundleKind::PreStatistical),
        other => Err(ZooError::validation(
            "builtin name",
            format!(
                "unknown built-in '{other}'; known: {}",
                BUILTIN_NAMES.join(", ")
            ),
        )),
    }
}

/// Parses and validates a manifold specification document.
pub fn load_spec(document: &str) -> Result<GeometryBundle, ZooError> {
    let raw: RawSpec = serde_json::from_str(document).map_err(|e| ZooError::ParseError {
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })?;
    if let Some(v) = raw.version {
        if v != 1 {
            return Err(ZooError::validation(
                "schema version",
                format!("unsupported version {v}"),
            ));
        }
    }
    if let Some(name) = &raw.name {
        let mut full = name.clone();
        match name.as_str() {
            "sphere" => {
                if let Some(r) = raw.radius {
                    full = format!("sphere:{r}");
                }
            }
            "euclidean" => {
                if let Some(d) = raw.dim {
                    full = format!("euclidean:{d}");
                }
            }
            n if n.starts_with("random_") => {
                full = format!("{n}:{}:{}", raw.dim.unwrap_or(3), raw.seed.unwrap_or(42));
            }
            _ => {}
        }
        return builtin_by_name(&full);
    }
    let dim = raw
        .dim
        .ok_or_else(|| ZooError::validation("dimension", "missing 'dim'"))?;
    if !(2..=4).contains(&dim) {
        return Err(ZooError::validation(
            "dimension",
            format!("dim {dim} outside 2..=4"),
        ));
    }
    let boxes = raw
        .domain
        .ok_or_else(|| ZooError::validation("domain", "missing 'domain'"))?;
    if boxes.len() != dim {
        return Err(ZooError::validation(
            "domain",
            format!("{} intervals for dim {dim}", boxes.len()),
        ));
    }
    let domain = Domain::new(
        boxes.iter().map(|b| b[0]).collect(),
        boxes.iter().map(|b| b[1]).collect(),
    )
    .map_err(|e| ZooError::validation("domain", e.to_string()))?;
    let metric_raw = raw
        .metric
        .ok_or_else(|| ZooError::validation("metric", "missing 'metric'"))?;
    let g = metric_from_raw(&metric_raw, domain.clone())?;
    validate_metric(&g)?;
    let name = format!("spec(dim={dim})");
    let bundle = match raw.cubic {
        None => GeometryBundle::levi_civita(&name, g.clone()),
        Some(RawCubic::Named(s)) if s == "zero" => GeometryBundle::levi_civita(&name, g.clone()),
        Some(RawCubic::Named(s)) => {
            return Err(ZooError::validation(
                "cubic",
                format!("unknown cubic descriptor '{s}'"),
            ))
        }
        Some(RawCubic::Terms(t)) => {
            let polys = Arc::new(tensor_polys(&t.terms, 3, dim)?);
            let c = cubic_field(domain.clone(), move |x| {
                polys
                    .iter()
                    .map(|p| p.as_ref().map_or(chart_core::Jet2::ZERO, |p| p.eval(x)))
                    .collect()
            });
            let totally = cubic_symmetry(&c)?;
            let mode = match t.mode.as_deref() {
                Some("totally_symmetric") => {
                    if !totally {
                        return Err(ZooError::validation(
                            "cubic total symmetry",
                            "mode totally_symmetric but C is not",
                        ));
                    }
                    CubicMode::TotallySymmetric
                }
                Some("symmetric_last_two") => CubicMode::SymmetricLastTwo,
                None if totally => CubicMode::TotallySymmetric,
                None => CubicMode::SymmetricLastTwo,
                Some(other) => {
                    return Err(ZooError::validation(
                        "cubic",
                        format!("unknown mode '{other}'"),
                    ))
                }
            };
            statistical_pair_from_cubic(&g, &c, mode, &name)
                .map_err(|e| ZooError::validation("bundle invariants", e.to_string()))?
        }
    };
    match raw.nabla_star_perturbation {
        None => Ok(bundle),
        Some(t) => {
            let polys = Arc::new(tensor_polys(&t.terms, 3, dim)?);
            let star = bundle.nabla_star.map(move |p, mut jet| {
                let x = chart_core::Jet2::seed(p.coords());
                for (o, q) in polys.iter().enumerate() {
                    if let Some(q) = q {
                        let add: Jet1 = q.eval(&x).to_jet1();
                        jet.data[o] += add;
                    }
                }
                Ok(jet)
            });
            Ok(GeometryBundle {
                nabla_star: star,
                name: format!("{name}+perturbed"),
                ..bundle
            })
        }
    }
}
