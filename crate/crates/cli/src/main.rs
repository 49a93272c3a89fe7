//! `worldfn`: run one world-function experiment from a JSON config.
//!
//! Exit status is 0 on success, 1 for invalid input and 2 when a numerical
//! solver fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod experiment;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use worldfn_core::solvers::SolveOptions;
use worldfn_core::{Error, Result};

use commands::Report;
use experiment::{ExperimentConfig, Format};

#[derive(Debug, Parser)]
#[command(name = "worldfn", version, about = "Geometry defined by a world function: algebra, solution sets, objects and transport")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Result file; overrides `output.path`. Without any path the result goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Solver residual tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seeding grid points per axis.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Sampling seed for `verify`.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// σ values for point pairs, or σ(origin, ·) over a grid.
    Eval,
    /// Scalar product of two point-pair vectors.
    Scalar,
    /// All vectors at Q0 equivalent to a given vector.
    Equiv,
    /// Segment between two points.
    Segment,
    /// Straight through two points.
    Straight,
    /// Straight through Q0 parallel to a vector.
    Straight2,
    /// Cylinder around an axis through a given point.
    Cylinder,
    /// Collinearity cone of a tangent vector under a small displacement.
    Cone,
    /// Holonomy of conventional transport and its comparison with the cone.
    TransportCompare,
    /// Identity and axiom checks on sampled points.
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eval => "eval",
            Command::Scalar => "scalar",
            Command::Equiv => "equiv",
            Command::Segment => "segment",
            Command::Straight => "straight",
            Command::Straight2 => "straight2",
            Command::Cylinder => "cylinder",
            Command::Cone => "cone",
            Command::TransportCompare => "transport-compare",
            Command::Verify => "verify",
        }
    }
}

fn solve_options(cli: &Cli, cfg: &ExperimentConfig) -> Result<SolveOptions> {
    let mut opts = SolveOptions::default();
    if let Some(t) = cli.tol.or(cfg.solver.tol) {
        opts = opts.with_tol(t);
    }
    if let Some(n) = cli.grid.or(cfg.solver.grid) {
        opts = opts.with_grid(n);
    }
    if let Some(r) = cfg.solver.refinement {
        opts = opts.with_refinement(r);
    }
    if !(opts.tol > 0.0 && opts.tol.is_finite()) {
        return Err(Error::Validation(format!("tolerance must be positive, got {}", opts.tol)));
    }
    if opts.grid.points_per_axis < 2 {
        return Err(Error::Validation("grid needs at least 2 points per axis".into()));
    }
    Ok(opts)
}

fn run(cli: &Cli) -> Result<()> {
    let config_path = cli.config.as_deref().ok_or_else(|| Error::Validation("--config is required".into()))?;
    let cfg = ExperimentConfig::load(config_path)?;
    cfg.check_command(cli.command)?;
    let base_dir = config_path.parent().unwrap_or(Path::new("."));
    let geometry = cfg.geometry.build(base_dir)?;
    let g = geometry.as_ref();
    let opts = solve_options(cli, &cfg)?;
    let c = cli.command;

    let report: Report = match c {
        Command::Eval => commands::eval(g, &cfg.args(c)?, opts.grid.points_per_axis)?,
        Command::Scalar => commands::scalar(g, &cfg.args(c)?)?,
        Command::Equiv => commands::equiv(g, &cfg.args(c)?, &opts)?,
        Command::Segment | Command::Straight | Command::Straight2 | Command::Cylinder => {
            commands::object(g, c, &cfg.args(c)?, &opts)?
        }
        Command::Cone => commands::cone(g, cfg.geometry.metric_field()?.as_ref(), &cfg.args(c)?)?,
        Command::TransportCompare => commands::transport_compare(g, cfg.geometry.metric_field()?.as_ref(), &cfg.args(c)?)?,
        Command::Verify => commands::verify(g, &cfg.args(c)?, cli.seed, opts)?,
    };

    let format = cli.format.unwrap_or(cfg.output.format);
    let body = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => report.csv,
    };
    let out = cli.out.clone().or_else(|| cfg.output.path.as_ref().map(|p| base_dir.join(p)));
    let mut stdout = std::io::stdout().lock();
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, body)?;
            stdout.write_all(report.summary.as_bytes())?;
        }
        None => stdout.write_all(&body)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("worldfn {}: {e}", cli.command.name());
            ExitCode::from(if e.is_solver_failure() { 2 } else { 1 })
        }
    }
}
