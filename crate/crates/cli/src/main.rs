//! Batch front end: box/well spectra, canonical states, composite checks,
//! shape traces and gap scans, the entropy-criteria suite, and classical
//! fundamental-relation curves, emitted as deterministic CSV/JSON/SVG.
//!
//! Exit codes: 0 on success with all declared artifacts written; 2 on any
//! validation error, with a message naming the violated precondition.

mod commands;
mod json;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "qtherm",
    about = "Quantum-thermodynamics batch laboratory: canonical states, entropy criteria, composite spectra, shape-change traces",
    version
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args)]
struct RunConfig {
    /// Directory for output artifacts (created if missing).
    #[arg(long, default_value = ".", global = true)]
    out_dir: PathBuf,
    /// Seed for all randomized sweeps; falls back to QTHERM_SEED, then 42.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Boltzmann constant scaling applied to entropies and 1/T on output.
    #[arg(long, default_value_t = 1.0, global = true)]
    k: f64,
    /// Override the neglected-tail-mass tolerance for truncated box spectra
    /// (default 1e-8).
    #[arg(long, global = true)]
    tail_mass_limit: Option<f64>,
}

impl RunConfig {
    fn seed(&self) -> Result<u64, String> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        match std::env::var("QTHERM_SEED") {
            Ok(text) => text
                .parse()
                .map_err(|_| format!("QTHERM_SEED must be a 64-bit integer, got {text:?}")),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a box or finite-difference-well spectrum as CSV.
    Spectrum(SpectrumArgs),
    /// Canonical stable-equilibrium state of a level list as JSON.
    Gibbs(GibbsArgs),
    /// Tensor-product composite checks: additivity, the log-occupation
    /// identity, and flow direction.
    Composite(CompositeArgs),
    /// Run a constant-volume shape trajectory and write the reallocation
    /// trace.
    ShapeTrace(ShapeTraceArgs),
    /// Entropy gap between two equal-volume shapes across an energy grid.
    ShapeGap(ShapeGapArgs),
    /// Run the nine-criteria entropy suite.
    Criteria(CriteriaArgs),
    /// Ideal-gas fundamental-relation curves and the absent-constituent
    /// potential sweep.
    Fundamental(FundamentalArgs),
    /// Spin-ladder fundamental relation: both zero-temperature endpoints.
    Spin(SpinArgs),
}

#[derive(Args)]
struct BoxSource {
    /// Box sides as "b,c,d".
    #[arg(long, value_name = "B,C,D", conflicts_with_all = ["volume", "ratio_bc", "ratio_cd"])]
    sides: Option<String>,
    /// Box volume (used with --ratio-bc/--ratio-cd).
    #[arg(long, requires = "ratio_bc", requires = "ratio_cd")]
    volume: Option<f64>,
    /// Aspect ratio b/c.
    #[arg(long)]
    ratio_bc: Option<f64>,
    /// Aspect ratio c/d.
    #[arg(long)]
    ratio_cd: Option<f64>,
}

#[derive(Args)]
struct CutoffArgs {
    /// Retain the lowest COUNT levels.
    #[arg(long, conflicts_with = "max_energy")]
    max_count: Option<usize>,
    /// Retain all levels with energy at most E.
    #[arg(long)]
    max_energy: Option<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: BoxSource,
    #[command(flatten)]
    cutoff: CutoffArgs,
    /// Finite-difference well: potential CSV, one value per line.
    #[arg(long, value_name = "FILE")]
    well_potential: Option<PathBuf>,
    /// Grid step for --well-potential.
    #[arg(long, requires = "well_potential")]
    step: Option<f64>,
}

#[derive(Args)]
struct GibbsArgs {
    /// Explicit level list "e0,e1,…" (treated as the complete spectrum).
    #[arg(long, value_name = "E0,E1,...")]
    levels: Option<String>,
    #[command(flatten)]
    source: BoxSource,
    #[command(flatten)]
    cutoff: CutoffArgs,
    /// Inverse temperature β = 1/kT.
    #[arg(long, conflicts_with = "energy", allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Target mean energy (β found by inversion).
    #[arg(long, allow_negative_numbers = true)]
    energy: Option<f64>,
}

#[derive(Args)]
struct CompositeArgs {
    /// Level list of subsystem A, "e0,e1,…" (complete).
    #[arg(long, value_name = "E0,E1,...")]
    levels_a: String,
    /// Level list of subsystem B, "e0,e1,…" (complete).
    #[arg(long, value_name = "E0,E1,...")]
    levels_b: String,
    /// Inverse temperature of A (and of B unless --beta-b is given).
    #[arg(long, allow_negative_numbers = true)]
    beta_a: f64,
    /// Inverse temperature of B, for mismatched-temperature checks.
    #[arg(long, allow_negative_numbers = true)]
    beta_b: Option<f64>,
}

#[derive(Args)]
struct ShapeTraceArgs {
    /// Trajectory configuration JSON (volume, mode, samples of t/r_b/r_c).
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Levels retained per trace row.
    #[arg(long, default_value_t = qtherm::shape::DEFAULT_RETAINED_LEVELS)]
    retained: usize,
    #[command(flatten)]
    cutoff: CutoffArgs,
    /// Also write an SVG chart of entropy and reallocation step vs time.
    #[arg(long)]
    svg: bool,
}

#[derive(Args)]
struct ShapeGapArgs {
    /// Sides of shape A, "b,c,d".
    #[arg(long, default_value = "1,1,1", value_name = "B,C,D")]
    shape_a: String,
    /// Sides of shape B, "b,c,d".
    #[arg(long, default_value = "2,1,0.5", value_name = "B,C,D")]
    shape_b: String,
    /// Lowest grid energy.
    #[arg(long)]
    e_min: f64,
    /// Highest grid energy.
    #[arg(long)]
    e_max: f64,
    /// Number of geometrically spaced grid points.
    #[arg(long, default_value_t = 9)]
    points: usize,
    /// Spectrum cutoff as a multiple of each grid energy.
    #[arg(long, default_value_t = 30.0)]
    multiplier: f64,
}

#[derive(Args)]
struct CriteriaArgs {
    /// Hilbert-space dimensions for the random ensembles, "d1,d2,…".
    #[arg(long, default_value = "2,3,4,6,8,12,16", value_name = "D1,D2,...")]
    dims: String,
    /// Trials per dimension.
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

#[derive(Args)]
struct FundamentalArgs {
    /// Particle amount n.
    #[arg(long, default_value_t = 1.0)]
    amount: f64,
    /// Volume V.
    #[arg(long, default_value_t = 1.0)]
    volume: f64,
    /// Lowest curve energy.
    #[arg(long, default_value_t = 0.5)]
    e_min: f64,
    /// Highest curve energy.
    #[arg(long, default_value_t = 50.0)]
    e_max: f64,
    /// Number of grid points.
    #[arg(long, default_value_t = 50)]
    points: usize,
    /// Also emit mu_sweep.csv: μ under this many halvings of n, ending at
    /// the n = 0 marker row.
    #[arg(long)]
    halvings: Option<usize>,
}

#[derive(Args)]
struct SpinArgs {
    /// Number of spins N.
    #[arg(long, default_value_t = 1.0)]
    spins: f64,
    /// Level gap ε.
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
    /// Interior filling grid size (f = i/(points+1), i = 1..=points).
    #[arg(long, default_value_t = 199)]
    points: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Spectrum(args) => commands::spectrum(&cli.run, args),
        Command::Gibbs(args) => commands::gibbs(&cli.run, args),
        Command::Composite(args) => commands::composite(&cli.run, args),
        Command::ShapeTrace(args) => commands::shape_trace(&cli.run, args),
        Command::ShapeGap(args) => commands::shape_gap(&cli.run, args),
        Command::Criteria(args) => commands::criteria(&cli.run, args),
        Command::Fundamental(args) => commands::fundamental(&cli.run, args),
        Command::Spin(args) => commands::spin(&cli.run, args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}
