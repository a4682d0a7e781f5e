//! `elastonet`: assemble, evaluate, characterize and synthesize
//! Rayleigh-damped elastodynamic networks from JSON files.

mod commands;
mod exit;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::exit::Failure;

#[derive(Parser, Debug)]
#[command(name = "elastonet", version, about = "Rayleigh-damped elastodynamic network toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the terminal response W(λ) over a sweep.
    Respond(RespondArgs),
    /// Check a canonical form (or the extracted form of a network) for admissibility.
    Characterize(CharacterizeArgs),
    /// Extract the pole-residue canonical form of a network.
    Extract(ExtractArgs),
    /// Build a network realizing a canonical form.
    Synthesize(SynthesizeArgs),
    /// Sample the resonance locus for fixed Rayleigh constants as CSV.
    Loci(LociArgs),
    /// Extract, check, synthesize and compare against the original network.
    Roundtrip(RoundtripArgs),
    /// Write a seeded random network.
    Generate(GenerateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Random seed. The ELASTONET_SEED environment variable takes precedence.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Worker threads for sweeps.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..), global = true)]
    pub jobs: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Axis {
    /// λ = iω for ω from --start to --stop.
    Imaginary,
    /// λ read from --lambdas as a JSON list of [re, im] pairs.
    ComplexList,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Axis::Imaginary)]
    pub axis: Axis,
    /// First ω of the sweep.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub start: f64,
    /// Last ω of the sweep.
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub stop: f64,
    /// Number of sweep points.
    #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u64).range(1..))]
    pub count: u64,
    #[arg(long, value_enum, default_value_t = Scale::Log)]
    pub scale: Scale,
    /// JSON file of [re, im] pairs, required with --axis complex-list.
    #[arg(long)]
    pub lambdas: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args, Debug)]
pub struct RespondArgs {
    /// Network JSON file.
    pub network: PathBuf,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Relative singular-value threshold below which λ is reported as a resonance.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    pub resonance_tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct CheckArgs {
    /// Tolerance of every admissibility condition.
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    pub tol: f64,
    /// Smallest |ω| of the passivity grid.
    #[arg(long, default_value_t = 1e-2, value_parser = positive)]
    pub omega_min: f64,
    /// Largest |ω| of the passivity grid.
    #[arg(long, default_value_t = 1e2, value_parser = positive)]
    pub omega_max: f64,
    /// Grid points per sign of ω.
    #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u64).range(1..))]
    pub omega_points: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ExtractTolArgs {
    /// Relative rank cutoff of pseudoinverses during massless elimination.
    #[arg(long, default_value_t = 1e-10, value_parser = positive)]
    pub tol_pinv: f64,
    /// Relative threshold for zero modal stiffness and its allowed coupling.
    #[arg(long, default_value_t = 1e-9, value_parser = positive)]
    pub tol_floppy: f64,
    /// Relative gap below which modal stiffnesses are merged.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub tol_cluster: f64,
    /// λ samples used to verify an extraction.
    #[arg(long, default_value_t = 20)]
    pub extract_samples: usize,
    /// Largest accepted relative error of an extraction.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub extract_tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct SynthArgs {
    /// Internal nodes stay within this distance of the terminal hull.
    #[arg(long, default_value_t = 0.1, value_parser = positive)]
    pub epsilon: f64,
    /// JSON list of points internal nodes must avoid.
    #[arg(long)]
    pub forbidden: Option<PathBuf>,
    /// Minimum distance of internal nodes to forbidden points, terminals and
    /// each other; defaults to 1e-6 times the larger of the hull diameter and ε.
    #[arg(long, value_parser = positive)]
    pub min_clearance: Option<f64>,
    /// Placement attempts per gadget.
    #[arg(long, default_value_t = 200)]
    pub max_attempts: usize,
    /// Relative eigenvalue cutoff when factoring W(0) and the residues.
    #[arg(long, default_value_t = 1e-12, value_parser = positive)]
    pub rank_tol: f64,
    /// λ samples of the round-trip verification.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Largest accepted round-trip relative error.
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub round_trip_tol: f64,
}

#[derive(Args, Debug)]
pub struct CharacterizeArgs {
    /// Network or canonical-form JSON file.
    pub input: PathBuf,
    #[command(flatten)]
    pub check: CheckArgs,
    #[command(flatten)]
    pub extract: ExtractTolArgs,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// Network JSON file.
    pub network: PathBuf,
    #[command(flatten)]
    pub extract: ExtractTolArgs,
}

#[derive(Args, Debug)]
pub struct SynthesizeArgs {
    /// Canonical-form JSON file.
    pub canonical: PathBuf,
    #[command(flatten)]
    pub synth: SynthArgs,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Args, Debug)]
pub struct LociArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
    /// Number of sampled points (at least 2).
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(2..))]
    pub points: u64,
}

#[derive(Args, Debug)]
pub struct RoundtripArgs {
    /// Network JSON file.
    pub network: PathBuf,
    #[command(flatten)]
    pub extract: ExtractTolArgs,
    #[command(flatten)]
    pub check: CheckArgs,
    #[command(flatten)]
    pub synth: SynthArgs,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(2..=3))]
    pub dim: u64,
    #[arg(long, default_value_t = 3)]
    pub terminals: usize,
    #[arg(long, default_value_t = 4)]
    pub interior: usize,
    /// Fraction of interior nodes with positive mass.
    #[arg(long, default_value_t = 0.5)]
    pub mass_fraction: f64,
    /// Stiffness-proportional damping; random in [0, 2) when omitted.
    #[arg(long, allow_negative_numbers = true, requires = "beta")]
    pub alpha: Option<f64>,
    /// Mass-proportional damping; random in [0, 2) when omitted.
    #[arg(long, allow_negative_numbers = true, requires = "alpha")]
    pub beta: Option<f64>,
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let common = &cli.common;
    let seed = commands::resolve_seed(common.seed)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(common.jobs as usize)
        .build()
        .map_err(|e| Failure::internal(e.to_string()))?;
    let out = common.output.as_deref();
    pool.install(|| match &cli.command {
        Command::Respond(a) => commands::respond(a, out),
        Command::Characterize(a) => commands::characterize(a, seed, out),
        Command::Extract(a) => commands::extract(a, seed, out),
        Command::Synthesize(a) => commands::synthesize(a, seed, out),
        Command::Loci(a) => commands::loci(a, out),
        Command::Roundtrip(a) => commands::roundtrip(a, seed, out),
        Command::Generate(a) => commands::generate(a, seed, out),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
