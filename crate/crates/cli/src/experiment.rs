//! Experiment configuration files.
//!
//! ```json
//! {
//!   "geometry": {"kind": "euclidean", "dimension": 3},
//!   "command": "scalar",
//!   "command_args": {
//!     "a": {"origin": [0, 0, 0], "tip": [1, 2, 3]},
//!     "b": {"origin": [1, 1, 1], "tip": [2, 0, -1]}
//!   },
//!   "output": {"path": "out/euclid_dot.json", "format": "json"}
//! }
//! ```

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use worldfn_core::config::GeometrySpec;
use worldfn_core::objects::ObjectSpec;
use worldfn_core::solvers::Refinement;
use worldfn_core::{BoundingBox, Error, Point, PointPairVector, Result};

use crate::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Relative paths resolve against the config file's directory.
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

/// Settings for the grid-seeded solvers.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub refinement: Option<Refinement>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometrySpec,
    /// Optional; when present it must name the subcommand being run.
    pub command: Option<String>,
    #[serde(default)]
    pub command_args: serde_json::Value,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
    }

    pub fn check_command(&self, command: Command) -> Result<()> {
        match &self.command {
            Some(c) if c != command.name() => {
                Err(Error::Validation(format!("config is for `{c}` but `{}` was run", command.name())))
            }
            _ => Ok(()),
        }
    }

    /// Decodes `command_args` into the record of one subcommand.
    pub fn args<T: DeserializeOwned>(&self, command: Command) -> Result<T> {
        let value = if self.command_args.is_null() { serde_json::json!({}) } else { self.command_args.clone() };
        serde_json::from_value(value).map_err(|e| Error::Validation(format!("command_args for `{}`: {e}", command.name())))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalArgs {
    /// Explicit point pairs.
    #[serde(default)]
    pub pairs: Vec<(Point, Point)>,
    /// σ(origin, x) over a grid of the region, as plot data.
    pub field: Option<FieldArgs>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldArgs {
    pub origin: Vec<f64>,
    pub region: BoundingBox,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalarArgs {
    pub a: PointPairVector,
    pub b: PointPairVector,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivArgs {
    pub a: PointPairVector,
    pub q0: Point,
    /// Search box; defaults to a box of half-width `half_width` around the
    /// translate of `a` to `q0`.
    pub region: Option<BoundingBox>,
    #[serde(default = "default_half_width")]
    pub half_width: f64,
}

fn default_half_width() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentMethod {
    #[default]
    Triangle,
    Parallelism,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectArgs {
    pub p0: Vec<f64>,
    pub p1: Vec<f64>,
    /// Third anchor: Q0 for `straight2`, Q for `cylinder`.
    pub q: Option<Vec<f64>>,
    #[serde(default)]
    pub method: SegmentMethod,
    /// Search box; defaults to the anchors' bounding box padded by their span.
    pub region: Option<BoundingBox>,
}

impl ObjectArgs {
    pub fn spec(&self, command: Command) -> Result<ObjectSpec> {
        let third = || {
            self.q.clone().ok_or_else(|| Error::Validation(format!("`{}` needs a third anchor `q`", command.name())))
        };
        let (p0, p1) = (self.p0.clone(), self.p1.clone());
        if command != Command::Segment && self.method != SegmentMethod::Triangle {
            return Err(Error::Validation("`method` applies to `segment` only".into()));
        }
        if matches!(command, Command::Segment | Command::Straight) && self.q.is_some() {
            return Err(Error::Validation(format!("`{}` takes no third anchor", command.name())));
        }
        Ok(match command {
            Command::Segment => match self.method {
                SegmentMethod::Triangle => ObjectSpec::SegmentByTriangle { p0, p1 },
                SegmentMethod::Parallelism => ObjectSpec::SegmentByParallelism { p0, p1 },
            },
            Command::Straight => ObjectSpec::StraightFirstKind { p0, p1 },
            Command::Straight2 => ObjectSpec::StraightSecondKind { p0, p1, q0: third()? },
            Command::Cylinder => ObjectSpec::Cylinder { p0, p1, q: third()? },
            _ => unreachable!("not an object command"),
        })
    }

    pub fn region(&self) -> Result<BoundingBox> {
        if let Some(r) = &self.region {
            return Ok(r.clone());
        }
        let anchors: Vec<&Vec<f64>> = [Some(&self.p0), Some(&self.p1), self.q.as_ref()].into_iter().flatten().collect();
        let n = self.p0.len();
        let lower: Vec<f64> = (0..n).map(|i| anchors.iter().map(|a| a[i]).fold(f64::INFINITY, f64::min)).collect();
        let upper: Vec<f64> = (0..n).map(|i| anchors.iter().map(|a| a[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
        let pad = lower.iter().zip(&upper).map(|(lo, hi)| hi - lo).fold(1.0, f64::max);
        BoundingBox::new(lower.iter().map(|v| v - pad).collect(), upper.iter().map(|v| v + pad).collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeArgs {
    pub base: Vec<f64>,
    pub u: Vec<f64>,
    pub dxi: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    360
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportArgs {
    /// Closed geodesic polygon; transport starts and ends at the first vertex.
    pub vertices: Vec<Vec<f64>>,
    /// Vector at the first vertex.
    pub u: Vec<f64>,
    #[serde(default = "default_edge_steps")]
    pub edge_steps: usize,
    /// Length of the trial displacements dξ in the cone table, in g units.
    #[serde(default = "default_step")]
    pub step: f64,
    /// Angles between dξ and u (degrees, g-orthonormal frame; 2D charts).
    #[serde(default = "default_angles")]
    pub angles_deg: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_edge_steps() -> usize {
    400
}

fn default_step() -> f64 {
    1e-2
}

fn default_angles() -> Vec<f64> {
    vec![0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    #[serde(default = "default_verify_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    pub region: Option<BoundingBox>,
    #[serde(default = "default_true")]
    pub transitivity: bool,
}

fn default_verify_samples() -> usize {
    1000
}

fn default_true() -> bool {
    true
}
