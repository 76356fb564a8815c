//! The `gicee` command line.
//!
//! Exit codes: 0 success, 1 configuration error, 2 validation failure,
//! 3 solver failure. The worker pool size is read from `GICEE_WORKERS`.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::model::{validate_allocation, ChannelParams, Preset, TimeSharedAllocation};
use crate::polytope::{pareto_merge, RatePoint};
use crate::region::{region_for_allocation, region_union, RegionError, RegionSpec};
use crate::schemes::{ctdma_region, CtdmaGrid, JamScale, Variant};
use crate::validation::{mi_oracle_suite, projection_suite, submodularity_suite, SuiteResult};

use config::{check_steps, directions, resolve_channel, resolve_variant, ChannelFlags, RunConfig};
use output::{emit, frontier_csv, Sidecar};

pub const WORKERS_ENV: &str = "GICEE_WORKERS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

impl From<RegionError> for CliError {
    fn from(e: RegionError) -> Self {
        match e {
            RegionError::Allocation(_) | RegionError::Scheme(_) | RegionError::Spec(_) => {
                CliError::Config(e.to_string())
            }
            RegionError::Mi(_)
            | RegionError::Projection(_)
            | RegionError::AllocationFailures { .. } => CliError::Solver(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gicee",
    version,
    about = "Secrecy rate regions for the Gaussian interference channel with an external eavesdropper"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Union of per-allocation regions over a power grid.
    Region(RegionArgs),
    /// Cooperative TDMA region over a time-fraction and jamming grid.
    Ctdma(CtdmaArgs),
    /// Region of a single allocation read from a JSON file.
    Point(PointArgs),
    /// Seeded oracle self-checks.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named channel: fig2 or fig3.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    c12: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c21: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c1e: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2e: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p2: Option<f64>,
}

impl ChannelArgs {
    fn load(&self) -> Result<(RunConfig, config::ResolvedChannel), CliError> {
        let file = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = ChannelFlags {
            preset: self.preset.clone(),
            c12: self.c12,
            c21: self.c21,
            c1e: self.c1e,
            c2e: self.c2e,
            p1: self.p1,
            p2: self.p2,
        };
        let resolved = resolve_channel(&file, &flags)?;
        Ok((file, resolved))
    }
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// full, r3, borcp or ncp [default: r3]
    #[arg(long)]
    variant: Option<String>,
    /// Grid points per power dimension [default: 11]
    #[arg(long)]
    steps: Option<usize>,
    /// Support directions per projection [default: 64]
    #[arg(long)]
    directions: Option<usize>,
    /// Time-sharing states per allocation [default: 1]
    #[arg(long)]
    states: Option<usize>,
    /// Weight resolution for multi-state allocations [default: 3]
    #[arg(long)]
    weight_steps: Option<usize>,
    /// CSV path; a `.json` sidecar is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CtdmaArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// ctdma, ctdma_nscp or tdma [default: ctdma]
    #[arg(long)]
    variant: Option<String>,
    /// Time-fraction grid points [default: 21]
    #[arg(long)]
    steps: Option<usize>,
    /// Upper end of the dense jamming segment
    #[arg(long)]
    jam_dense_max: Option<f64>,
    /// Jamming levels in the dense segment
    #[arg(long)]
    jam_dense_steps: Option<usize>,
    /// Jamming levels from the dense segment up to the power cap
    #[arg(long)]
    jam_coarse_steps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PointArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Allocation JSON: {"states": [{"weight": .., "pc1": .., ...}]}
    #[arg(long)]
    alloc: Option<PathBuf>,
    #[arg(long)]
    directions: Option<usize>,
    /// Optional CSV path for the frontier.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// [default: 7]
    #[arg(long)]
    seed: Option<u64>,
    /// Random instances for the mutual-information suites [default: 1000]
    #[arg(long)]
    samples: Option<usize>,
    /// Pass threshold for the mutual-information suites [default: 1e-12]
    #[arg(long)]
    tolerance: Option<f64>,
    /// Random rate systems for the projection suite [default: 20]
    #[arg(long)]
    systems: Option<usize>,
    /// Grid pitch of the projection oracle [default: 0.1]
    #[arg(long)]
    pitch: Option<f64>,
    #[arg(long)]
    directions: Option<usize>,
}

fn cmd_region(args: &RegionArgs) -> Result<(), CliError> {
    let (file, resolved) = args.channel.load()?;
    let variant = resolve_variant(
        args.variant.as_deref(),
        file.variant.as_deref(),
        Variant::R3,
    )?;
    if variant.is_time_division() {
        return Err(CliError::Config(format!(
            "variant `{variant}` belongs to the ctdma command"
        )));
    }
    let mut spec = RegionSpec::new(
        resolved.channel,
        variant,
        check_steps(args.steps.or(file.steps).unwrap_or(11))?,
        directions(args.directions, &file)?,
    );
    spec.states = args.states.or(file.states).unwrap_or(1);
    spec.weight_steps = args.weight_steps.or(file.weight_steps).unwrap_or(3);
    spec.validate()?;
    let frontier = region_union(&spec)?;
    let sidecar = Sidecar::new("region", resolved.preset, resolved.channel, &frontier);
    emit(
        args.out.as_deref().or(file.out.as_deref()),
        &frontier_csv(&frontier),
        &sidecar,
    )
}

fn cmd_ctdma(args: &CtdmaArgs) -> Result<(), CliError> {
    let (file, resolved) = args.channel.load()?;
    let variant = resolve_variant(
        args.variant.as_deref(),
        file.variant.as_deref(),
        Variant::Ctdma,
    )?;
    if !variant.is_time_division() {
        return Err(CliError::Config(format!(
            "variant `{variant}` belongs to the region command"
        )));
    }
    let base = file.jam.unwrap_or_default();
    let jam = JamScale {
        dense_max: args.jam_dense_max.unwrap_or(base.dense_max),
        dense_steps: args.jam_dense_steps.unwrap_or(base.dense_steps),
        coarse_steps: args.jam_coarse_steps.unwrap_or(base.coarse_steps),
    };
    if !(jam.dense_max > 0.0 && jam.dense_max.is_finite()) {
        return Err(CliError::Config(format!(
            "jam dense_max must be positive, got {}",
            jam.dense_max
        )));
    }
    let steps = check_steps(args.steps.or(file.steps).unwrap_or(21))?;
    let grid = CtdmaGrid::new(variant, steps, jam).map_err(|e| CliError::Config(e.to_string()))?;
    let frontier = ctdma_region(&resolved.channel, &grid);
    let sidecar = Sidecar::new("ctdma", resolved.preset, resolved.channel, &frontier);
    emit(
        args.out.as_deref().or(file.out.as_deref()),
        &frontier_csv(&frontier),
        &sidecar,
    )
}

#[derive(Debug, Serialize)]
struct PointReport {
    preset: Option<Preset>,
    channel: ChannelParams,
    allocation: TimeSharedAllocation,
    #[serde(rename = "M")]
    directions: usize,
    infeasible: bool,
    points: Vec<RatePoint>,
}

fn load_allocation(path: &Path) -> Result<TimeSharedAllocation, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn cmd_point(args: &PointArgs) -> Result<(), CliError> {
    let (file, resolved) = args.channel.load()?;
    let path = args
        .alloc
        .as_deref()
        .or(file.alloc.as_deref())
        .ok_or_else(|| CliError::Config("point needs --alloc <file>".into()))?;
    let allocation = load_allocation(path)?;
    validate_allocation(&resolved.channel, &allocation)
        .map_err(|e| CliError::Config(format!("invalid allocation: {e}")))?;
    let m = directions(args.directions, &file)?;
    let frontier = pareto_merge(&[region_for_allocation(&resolved.channel, &allocation, m)?]);
    let report = PointReport {
        preset: resolved.preset,
        channel: resolved.channel,
        allocation,
        directions: m,
        infeasible: frontier.is_empty(),
        points: frontier.points.clone(),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if let Some(out) = args.out.as_deref().or(file.out.as_deref()) {
        fs::write(out, frontier_csv(&frontier))
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", out.display())))?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ValidationReport {
    seed: u64,
    passed: bool,
    suites: Vec<SuiteResult>,
}

fn cmd_validate(args: &ValidateArgs) -> Result<(), CliError> {
    let file = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let seed = args.seed.or(file.seed).unwrap_or(7);
    let samples = args.samples.or(file.samples).unwrap_or(1000);
    let tolerance = args.tolerance.or(file.tolerance).unwrap_or(1e-12);
    let systems = args.systems.or(file.systems).unwrap_or(20);
    let pitch = args.pitch.or(file.pitch).unwrap_or(0.1);
    let m = directions(args.directions, &file)?;
    if samples == 0 {
        return Err(CliError::Config("samples must be at least 1, got 0".into()));
    }
    if systems == 0 {
        return Err(CliError::Config("systems must be at least 1, got 0".into()));
    }
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(CliError::Config(format!(
            "tolerance must be finite and non-negative, got {tolerance}"
        )));
    }
    if !(pitch > 0.0 && pitch.is_finite()) {
        return Err(CliError::Config(format!(
            "pitch must be positive, got {pitch}"
        )));
    }
    let projection =
        projection_suite(seed, systems, pitch, m).map_err(|e| CliError::Solver(e.to_string()))?;
    let suites = vec![
        mi_oracle_suite(seed, samples, tolerance),
        submodularity_suite(seed, samples.div_ceil(20), tolerance),
        projection,
    ];
    let report = ValidationReport {
        seed,
        passed: suites.iter().all(|s| s.passed),
        suites,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| s.name.as_str())
            .collect();
        Err(CliError::Validation(format!(
            "failed suites: {}",
            failed.join(", ")
        )))
    }
}

fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(WORKERS_ENV) {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Config(format!(
                "{WORKERS_ENV} must be a positive integer, got `{raw}`"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let pool = worker_pool()?;
    pool.install(|| match &cli.command {
        Command::Region(a) => cmd_region(a),
        Command::Ctdma(a) => cmd_ctdma(a),
        Command::Point(a) => cmd_point(a),
        Command::Validate(a) => cmd_validate(a),
    })
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}
