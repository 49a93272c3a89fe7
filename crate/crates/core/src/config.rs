//! JSON geometry descriptions.
//!
//! ```json
//! {"kind": "deformed", "dimension": 2, "deformation": "0.1*sigma^2"}
//! {"kind": "minkowski", "dimension": 3, "signature": "+--"}
//! {"kind": "tabulated", "table_path": "sigma.csv"}
//! {"kind": "riemannian", "metric": {"source": "sphere", "radius": 1.0}}
//! ```
//!
//! Deformation expressions see `sigma` (the base value), the coordinates of
//! both points as `x0, x1, ..` and `y0, y1, ..` (or `i`, `j` for discrete
//! bases) and any user `constants`. Metric components and embeddings see
//! the chart coordinates `x0, x1, ..`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::CompiledExpr;
use crate::geometries::{make_deformed, make_tabulated, Euclidean, Minkowski};
use crate::point::{BoundingBox, Domain, Geometry, Point};
use crate::riemann::{AnalyticSphere, BvpOptions, MetricField, RiemannWorldFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GeometrySpec {
    Euclidean {
        dimension: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounds: Option<BoundingBox>,
    },
    Minkowski {
        dimension: usize,
        /// Sign pattern such as "+--"; only one timelike leading axis is supported.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signature: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bounds: Option<BoundingBox>,
    },
    Deformed {
        /// Dimension of the default Euclidean base.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dimension: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<GeometrySpec>>,
        /// d(σ_base, P, Q), added to σ_base for P ≠ Q.
        deformation: String,
        #[serde(default)]
        constants: BTreeMap<String, f64>,
    },
    Tabulated {
        /// CSV file, row i column j = σ(i, j); relative to the config file.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table_path: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        table: Option<Vec<Vec<f64>>>,
    },
    Riemannian {
        metric: MetricSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bvp: Option<BvpSpec>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    /// g_ik as a row-major matrix of expressions.
    Explicit {
        dimension: usize,
        components: Vec<Vec<String>>,
        #[serde(default)]
        constants: BTreeMap<String, f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chart: Option<BoundingBox>,
    },
    /// X^l(x) into a higher-dimensional Euclidean space.
    Embedding {
        dimension: usize,
        map: Vec<String>,
        #[serde(default)]
        constants: BTreeMap<String, f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        chart: Option<BoundingBox>,
    },
    /// Sphere in (θ, φ). `analytic` makes σ the closed form ½R²ω² instead of
    /// a geodesic solve; `embedded` induces g from the embedding.
    Sphere {
        radius: f64,
        #[serde(default)]
        analytic: bool,
        #[serde(default)]
        embedded: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BvpSpec {
    #[serde(default = "default_steps")]
    pub steps: usize,
    #[serde(default = "default_bvp_tol")]
    pub tol: f64,
}

fn default_steps() -> usize {
    BvpOptions::default().steps
}

fn default_bvp_tol() -> f64 {
    BvpOptions::default().tol
}

impl GeometrySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the world function. Relative file paths resolve against `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<Geometry> {
        match self {
            GeometrySpec::Euclidean { dimension, bounds } => {
                let mut e = Euclidean::new(*dimension)?;
                if let Some(b) = bounds {
                    e = e.with_bounds(b.clone())?;
                }
                Ok(Arc::new(e))
            }
            GeometrySpec::Minkowski { dimension, signature, bounds } => {
                if let Some(sig) = signature {
                    check_signature(sig, *dimension)?;
                }
                let mut m = Minkowski::new(*dimension)?;
                if let Some(b) = bounds {
                    m = m.with_bounds(b.clone())?;
                }
                Ok(Arc::new(m))
            }
            GeometrySpec::Deformed { dimension, base, deformation, constants } => {
                let base = match (base, dimension) {
                    (Some(b), _) => b.build(base_dir)?,
                    (None, Some(n)) => Arc::new(Euclidean::new(*n)?),
                    (None, None) => return Err(Error::Validation("deformed geometry needs `dimension` or `base`".into())),
                };
                build_deformed(base, deformation, constants)
            }
            GeometrySpec::Tabulated { table_path, table } => match (table_path, table) {
                (Some(path), None) => make_tabulated(read_table(&base_dir.join(path))?),
                (None, Some(t)) => make_tabulated(t.clone()),
                _ => Err(Error::Validation("tabulated geometry needs exactly one of `table_path` or `table`".into())),
            },
            GeometrySpec::Riemannian { metric, bvp } => {
                if let MetricSpec::Sphere { radius, analytic: true, .. } = metric {
                    return Ok(Arc::new(AnalyticSphere::new(*radius)?));
                }
                let mf = Arc::new(metric.build()?);
                let mut opts = BvpOptions::default();
                if let Some(b) = bvp {
                    if b.steps == 0 || !(b.tol > 0.0) {
                        return Err(Error::Validation("bvp steps and tol must be positive".into()));
                    }
                    opts.steps = b.steps;
                    opts.tol = b.tol;
                }
                Ok(Arc::new(RiemannWorldFunction::with_options(mf, opts)))
            }
        }
    }

    /// The metric field behind a Riemannian geometry.
    pub fn metric_field(&self) -> Result<Option<MetricField>> {
        match self {
            GeometrySpec::Riemannian { metric, .. } => metric.build().map(Some),
            _ => Ok(None),
        }
    }
}

fn check_signature(sig: &str, dimension: usize) -> Result<()> {
    let expected: String = std::iter::once('+').chain(std::iter::repeat_n('-', dimension.saturating_sub(1))).collect();
    if sig != expected {
        return Err(Error::Validation(format!("minkowski signature must be {expected:?} for dimension {dimension}, got {sig:?}")));
    }
    Ok(())
}

fn coordinate_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn build_deformed(base: Geometry, source: &str, constants: &BTreeMap<String, f64>) -> Result<Geometry> {
    let names: Vec<String> = match base.domain() {
        Domain::Chart { dimension, .. } => {
            let mut v = vec!["sigma".to_string()];
            v.extend(coordinate_names("x", *dimension));
            v.extend(coordinate_names("y", *dimension));
            v
        }
        Domain::Discrete { .. } => vec!["sigma".into(), "i".into(), "j".into()],
    };
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let expr = CompiledExpr::compile(source, &refs, constants)?;
    let arity = names.len();
    let d = move |s: f64, p: &Point, q: &Point| -> f64 {
        let mut vars = Vec::with_capacity(arity);
        vars.push(s);
        match (p, q) {
            (Point::Coords(a), Point::Coords(b)) => {
                vars.extend_from_slice(a);
                vars.extend_from_slice(b);
            }
            (Point::Discrete(i), Point::Discrete(j)) => {
                vars.push(*i as f64);
                vars.push(*j as f64);
            }
            _ => return f64::NAN,
        }
        expr.eval(&vars)
    };
    make_deformed(base, Arc::new(d), source.to_string())
}

/// Reads a square σ table from CSV (no header).
pub fn read_table(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Validation(format!("cannot read table {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
        let row = record
            .iter()
            .map(|v| v.parse::<f64>().map_err(|_| Error::Validation(format!("{}: row {i}: not a number: {v:?}", path.display()))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

impl MetricSpec {
    pub fn build(&self) -> Result<MetricField> {
        match self {
            MetricSpec::Sphere { radius, embedded, .. } => {
                if *embedded {
                    MetricField::sphere_embedded(*radius)
                } else {
                    MetricField::sphere(*radius)
                }
            }
            MetricSpec::Explicit { dimension, components, constants, chart } => {
                let n = *dimension;
                if components.len() != n || components.iter().any(|r| r.len() != n) {
                    return Err(Error::Validation(format!("metric components must be a {n}×{n} matrix")));
                }
                let names = coordinate_names("x", n);
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let compiled = components
                    .iter()
                    .flatten()
                    .map(|c| CompiledExpr::compile(c, &refs, constants))
                    .collect::<Result<Vec<_>>>()?;
                let label = format!("explicit(n={n})");
                let g = move |x: &[f64]| DMatrix::from_row_iterator(n, n, compiled.iter().map(|e| e.eval(x)));
                with_chart(MetricField::explicit(n, Arc::new(g), label), chart)
            }
            MetricSpec::Embedding { dimension, map, constants, chart } => {
                let names = coordinate_names("x", *dimension);
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let compiled = map.iter().map(|c| CompiledExpr::compile(c, &refs, constants)).collect::<Result<Vec<_>>>()?;
                let ambient = compiled.len();
                let label = format!("embedding(n={dimension}, m={ambient})");
                let f = move |x: &[f64]| compiled.iter().map(|e| e.eval(x)).collect::<Vec<f64>>();
                with_chart(MetricField::from_embedding(*dimension, ambient, Arc::new(f), label)?, chart)
            }
        }
    }
}

fn with_chart(mf: MetricField, chart: &Option<BoundingBox>) -> Result<MetricField> {
    match chart {
        Some(c) => mf.with_chart(c.clone()),
        None => Ok(mf),
    }
}
