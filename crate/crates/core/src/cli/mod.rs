//! The `dhydro` command-line front end.
//!
//! Subcommands `spectrum`, `scan-d`, `potential` and `verify` write CSV
//! tables or JSON documents to stdout or `--out`. Settings come from flags,
//! then an optional `--config` file of `key = value` lines, then defaults.
//!
//! Exit codes: 0 success, 1 solver failure or failed verification,
//! 2 supercritical problem refused, 64 invalid usage.
//!
//! The worker count of the thread pool is read from [`WORKERS_ENV`]; it
//! changes runtime only, never the output bytes.

mod config;
pub mod format;
mod verify;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

pub use config::{CommandKind, OutputFormat, RunConfig};
use format::{csv, fmt_g, fmt_opt, round_g, round_opt};

use crate::eigensolver::{default_r_max, solve_states_with, GridSpec, SolveOptions, DEFAULT_INTERIOR_POINTS};
use crate::large_d::classical_limit_scan;
use crate::potentials::PotentialModel;
use crate::radial::{RadialProblem, StabilityKind};
use crate::Error;

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "DHYDRO_WORKERS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SUPERCRITICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const SPECTRUM_HEADER: &str =
    "D,l,n_r,Z,family,convention,energy_hartree,nodes,grid_points,extrapolated,estimated_order";
pub const SCAN_HEADER: &str = "D,l,Z,family,convention,classification,numeric_ground,\
classical_minimum,harmonic_estimate,ratio,predicted_ratio";
pub const POTENTIAL_HEADER: &str = "D,family,convention,Z,r0,r,phi,V";

#[derive(Debug, Parser)]
#[command(name = "dhydro", version, about = "Hydrogen-like atoms in D dimensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bound-state energies for each (D, l).
    Spectrum(SpectrumArgs),
    /// Ground state vs classical effective-potential minimum over D.
    ScanD(ScanArgs),
    /// Tabulate φ and V = -φ.
    Potential(PotentialArgs),
    /// Gauss-law, Poisson, oracle and collapse checks with a JSON verdict.
    Verify(VerifyArgs),
}

#[derive(Debug, Default, Args)]
pub(crate) struct ModelArgs {
    /// newtonian | consistent
    #[arg(long)]
    pub family: Option<String>,
    /// gaussian-4pi | solid-angle
    #[arg(long)]
    pub convention: Option<String>,
    /// Nuclear charge Z.
    #[arg(long)]
    pub z: Option<f64>,
    /// Cutoff length r0 of the two-dimensional logarithm.
    #[arg(long)]
    pub r0: Option<f64>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines providing defaults for unset flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Args)]
pub(crate) struct GridArgs {
    /// Inner wall; 0 puts it at the origin with the first node at h.
    #[arg(long = "r-min")]
    pub r_min: Option<f64>,
    /// Outer wall.
    #[arg(long = "r-max")]
    pub r_max: Option<f64>,
    /// Interior points of the coarsest grid.
    #[arg(long)]
    pub points: Option<usize>,
    /// Number of grids in the refinement ladder.
    #[arg(long)]
    pub rungs: Option<usize>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    /// Dimension(s), comma separated.
    #[arg(long, alias = "dims", value_delimiter = ',')]
    dim: Vec<u32>,
    /// Angular momentum (or several, comma separated).
    #[arg(long, value_delimiter = ',')]
    l: Vec<u32>,
    /// Number of states per (D, l).
    #[arg(long)]
    states: Option<usize>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct ScanArgs {
    /// Dimensions, comma separated, ascending.
    #[arg(long, alias = "dim", value_delimiter = ',')]
    dims: Vec<u32>,
    #[arg(long)]
    l: Option<u32>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct PotentialArgs {
    #[arg(long)]
    dim: Option<u32>,
    /// Radii, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    r: Vec<f64>,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Cases, comma separated (default: all). Names: flux-d<N>, poisson,
    /// oracle, collapse-d<N>, stable-d<N>, critical-d4.
    #[arg(long, value_delimiter = ',')]
    case: Vec<String>,
    #[arg(long)]
    l: Option<u32>,
    #[command(flatten)]
    model: ModelArgs,
}

/// Result of one CLI invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, stdout: String::new(), stderr: message.into() }
    }

    fn failure(code: i32, message: impl Into<String>) -> Self {
        Self { code, stdout: String::new(), stderr: message.into() }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// what would be printed.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let config = match RunConfig::from_cli(cli.command) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let pool = match worker_pool() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let outcome = pool.install(|| execute(&config));
    deliver(outcome, config.out.as_deref())
}

/// Entry point of the binary: runs with the process arguments and prints.
pub fn main_entry() -> i32 {
    let outcome = run(std::env::args_os());
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.code
}

fn worker_pool() -> crate::Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(value) = std::env::var(WORKERS_ENV) {
        let n: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| Error::Config(format!("{WORKERS_ENV} must be a positive integer, got `{value}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

fn deliver(mut outcome: Outcome, out: Option<&std::path::Path>) -> Outcome {
    if let Some(path) = out {
        if outcome.stdout.is_empty() {
            return outcome;
        }
        if let Err(e) = std::fs::write(path, &outcome.stdout) {
            return Outcome::failure(EXIT_FAILURE, format!("error: cannot write {}: {e}\n", path.display()));
        }
        outcome.stdout.clear();
    }
    outcome
}

fn execute(config: &RunConfig) -> Outcome {
    match config.command {
        CommandKind::Spectrum => cmd_spectrum(config),
        CommandKind::ScanD => cmd_scan_d(config),
        CommandKind::Potential => cmd_potential(config),
        CommandKind::Verify => verify::cmd_verify(config),
    }
}

fn solver_failure(e: &Error) -> Outcome {
    let code = match e {
        Error::Supercritical { .. } => EXIT_SUPERCRITICAL,
        _ => EXIT_FAILURE,
    };
    Outcome::failure(code, format!("error: {e}\n"))
}

fn render<T: Serialize>(config: &RunConfig, header: &str, rows: &[T], csv_row: impl Fn(&T) -> Vec<String>) -> String {
    match config.format {
        OutputFormat::Csv => csv(header, rows.iter().map(csv_row)),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Table<'a, T> {
                rows: &'a [T],
            }
            let mut s = serde_json::to_string_pretty(&Table { rows }).expect("rows serialize");
            s.push('\n');
            s
        }
    }
}

#[derive(Debug, Serialize)]
struct SpectrumLine {
    #[serde(rename = "D")]
    dimension: u32,
    l: u32,
    n_r: usize,
    #[serde(rename = "Z")]
    charge: f64,
    family: &'static str,
    convention: &'static str,
    energy_hartree: f64,
    nodes: usize,
    grid_points: usize,
    extrapolated: bool,
    estimated_order: Option<f64>,
}

/// Energies for every (D, l) pair, in input order.
pub fn cmd_spectrum(config: &RunConfig) -> Outcome {
    let mut problems = Vec::new();
    for &d in &config.dims {
        for &l in &config.ls {
            let problem = PotentialModel::new(config.family, config.convention, d, config.charge, config.r0)
                .and_then(|m| RadialProblem::new(d, l, m));
            match problem {
                Ok(p) => problems.push(p),
                Err(e) => return Outcome::usage(format!("error: {e}\n")),
            }
        }
    }
    if let Some(p) = problems.iter().find(|p| p.classify_stability().kind == StabilityKind::Supercritical) {
        return solver_failure(&Error::Supercritical { dimension: p.dimension(), l: p.angular_momentum() });
    }
    let options = SolveOptions { rungs: config.rungs, ..SolveOptions::default() };
    let results: Vec<_> = problems
        .par_iter()
        .map(|p| {
            let grid = spectrum_grid(config, p)?;
            solve_states_with(p, &grid, config.n_states, &options)
        })
        .collect();

    let mut lines = Vec::new();
    let mut stderr = String::new();
    for (problem, result) in problems.iter().zip(results) {
        let spectrum = match result {
            Ok(s) => s,
            Err(e) => return solver_failure(&e),
        };
        if spectrum.states.is_empty() && problem.classify_stability().no_intrinsic_bound_states {
            stderr.push_str(&format!(
                "note: D = {}, l = {} is a pure inverse-square problem without bound states\n",
                problem.dimension(),
                problem.angular_momentum()
            ));
        }
        if spectrum.unbound > 0 {
            stderr.push_str(&format!(
                "note: D = {}, l = {}: {} of {} requested levels lie in the continuum\n",
                problem.dimension(),
                problem.angular_momentum(),
                spectrum.unbound,
                spectrum.requested
            ));
        }
        for state in &spectrum.states {
            lines.push(SpectrumLine {
                dimension: problem.dimension(),
                l: problem.angular_momentum(),
                n_r: state.index,
                charge: config.charge,
                family: config.family.as_str(),
                convention: config.convention.as_str(),
                energy_hartree: round_g(state.energy),
                nodes: state.node_count,
                grid_points: state.grid.interior_points(),
                extrapolated: state.extrapolated,
                estimated_order: round_opt(state.estimated_order),
            });
        }
    }
    let stdout = render(config, SPECTRUM_HEADER, &lines, |r| {
        vec![
            r.dimension.to_string(),
            r.l.to_string(),
            r.n_r.to_string(),
            fmt_g(r.charge),
            r.family.to_string(),
            r.convention.to_string(),
            fmt_g(r.energy_hartree),
            r.nodes.to_string(),
            r.grid_points.to_string(),
            r.extrapolated.to_string(),
            fmt_opt(r.estimated_order),
        ]
    });
    Outcome { code: EXIT_OK, stdout, stderr }
}

fn spectrum_grid(config: &RunConfig, problem: &RadialProblem) -> crate::Result<GridSpec> {
    if config.r_min.is_none() && config.r_max.is_none() && config.interior_points.is_none() {
        return GridSpec::default_for(problem, config.n_states);
    }
    let r_max = match config.r_max {
        Some(r) => r,
        None => default_r_max(problem, config.n_states)?,
    };
    GridSpec::new(
        config.r_min.unwrap_or(0.0),
        r_max,
        config.interior_points.unwrap_or(DEFAULT_INTERIOR_POINTS),
    )
}

#[derive(Debug, Serialize)]
struct ScanLine {
    #[serde(rename = "D")]
    dimension: u32,
    l: u32,
    #[serde(rename = "Z")]
    charge: f64,
    family: &'static str,
    convention: &'static str,
    classification: &'static str,
    numeric_ground: Option<f64>,
    classical_minimum: Option<f64>,
    harmonic_estimate: Option<f64>,
    ratio: Option<f64>,
    predicted_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    message: Option<String>,
}

/// One row per dimension of the large-D scan.
pub fn cmd_scan_d(config: &RunConfig) -> Outcome {
    let l = config.ls.first().copied().unwrap_or(0);
    let rows = match classical_limit_scan(config.family, config.convention, config.charge, l, &config.dims) {
        Ok(rows) => rows,
        Err(e @ Error::Config(_)) => return Outcome::usage(format!("error: {e}\n")),
        Err(e) => return solver_failure(&e),
    };
    let mut stderr = String::new();
    let mut code = EXIT_OK;
    let lines: Vec<ScanLine> = rows
        .into_iter()
        .map(|row| {
            if let Some(m) = &row.message {
                code = EXIT_FAILURE;
                stderr.push_str(&format!("error: D = {}: {m}\n", row.dimension));
            }
            ScanLine {
                dimension: row.dimension,
                l,
                charge: config.charge,
                family: config.family.as_str(),
                convention: config.convention.as_str(),
                classification: row.classification.as_str(),
                numeric_ground: round_opt(row.numeric_ground),
                classical_minimum: round_opt(row.classical_minimum),
                harmonic_estimate: round_opt(row.harmonic_estimate),
                ratio: round_opt(row.ratio),
                predicted_ratio: round_opt(row.predicted_ratio),
                message: row.message,
            }
        })
        .collect();
    let stdout = render(config, SCAN_HEADER, &lines, |r| {
        vec![
            r.dimension.to_string(),
            r.l.to_string(),
            fmt_g(r.charge),
            r.family.to_string(),
            r.convention.to_string(),
            r.classification.to_string(),
            fmt_opt(r.numeric_ground),
            fmt_opt(r.classical_minimum),
            fmt_opt(r.harmonic_estimate),
            fmt_opt(r.ratio),
            fmt_opt(r.predicted_ratio),
        ]
    });
    Outcome { code, stdout, stderr }
}

#[derive(Debug, Serialize)]
struct PotentialLine {
    #[serde(rename = "D")]
    dimension: u32,
    family: &'static str,
    convention: &'static str,
    #[serde(rename = "Z")]
    charge: f64,
    r0: f64,
    r: f64,
    phi: f64,
    #[serde(rename = "V")]
    energy: f64,
}

/// φ(r) and V(r) at the requested radii.
pub fn cmd_potential(config: &RunConfig) -> Outcome {
    let d = config.dims.first().copied().unwrap_or(3);
    let model = match PotentialModel::new(config.family, config.convention, d, config.charge, config.r0) {
        Ok(m) => m,
        Err(e) => return Outcome::usage(format!("error: {e}\n")),
    };
    let mut lines = Vec::with_capacity(config.r_samples.len());
    for &r in &config.r_samples {
        let (phi, v) = match (model.electrostatic_potential(r), model.potential_energy(r)) {
            (Ok(phi), Ok(v)) => (phi, v),
            (Err(e), _) | (_, Err(e)) => return Outcome::usage(format!("error: {e}\n")),
        };
        lines.push(PotentialLine {
            dimension: d,
            family: config.family.as_str(),
            convention: config.convention.as_str(),
            charge: config.charge,
            r0: config.r0,
            r,
            phi: round_g(phi),
            energy: round_g(v),
        });
    }
    let stdout = render(config, POTENTIAL_HEADER, &lines, |p| {
        vec![
            p.dimension.to_string(),
            p.family.to_string(),
            p.convention.to_string(),
            fmt_g(p.charge),
            fmt_g(p.r0),
            fmt_g(p.r),
            fmt_g(p.phi),
            fmt_g(p.energy),
        ]
    });
    Outcome { code: EXIT_OK, stdout, stderr: String::new() }
}
