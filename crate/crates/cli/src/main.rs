//! `densecap`: capacities, identity checks, protocol runs and the
//! convex-roof functional from the command line.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input file not found,
//! 3 unparsable input or arguments, 4 invalid state or ensemble, 5 output
//! could not be written.

mod commands;
mod error;
mod output;
mod states;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "densecap",
    version,
    about = "Dense-coding capacities of shared quantum states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normal and dense-coding capacities, mutual information and the identity residual.
    Capacity(CapacityArgs),
    /// Randomized checks of the twirl, Gram and difference identities.
    Verify(VerifyArgs),
    /// Monte-Carlo run of the quantum or classical protocol.
    Simulate(SimulateArgs),
    /// Convex-roof correlation functional, with the two-qubit oracle when available.
    Entanglement(EntanglementArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    A2b,
    B2a,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    Bell,
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Inclusive parameter range `p0:p1:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Sweep {
    /// Grid points rounded to 12 significant digits, so `0:1:0.05` yields
    /// `0.15` rather than `0.15000000000000002`.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| {
                let p = self.start + i as f64 * self.step;
                output::sig12(p)
                    .parse::<f64>()
                    .expect("formatted float")
                    .min(self.end)
            })
            .collect()
    }
}

fn parse_sweep(text: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err("expected p0:p1:step".into());
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    let sweep = Sweep {
        start: num(start)?,
        end: num(end)?,
        step: num(step)?,
    };
    let ordered = sweep.step > 0.0 && sweep.end >= sweep.start && sweep.end.is_finite();
    if !ordered {
        return Err("need step > 0 and p1 >= p0".into());
    }
    Ok(sweep)
}

#[derive(Debug, Clone, Args)]
pub struct CapacityArgs {
    /// State file, or one of bell, werner:p, isotropic:d:p, max-entangled:d, bloch:x,y,z, mixed:d.
    /// With --sweep, a family: werner or isotropic:d.
    #[arg(long)]
    pub state: String,
    #[arg(long, value_enum, default_value_t = DirectionArg::A2b)]
    pub direction: DirectionArg,
    /// Largest accepted residual of the capacity-difference identity.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_parser = parse_sweep)]
    pub sweep: Option<Sweep>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Local dimension, 2 to 6.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Number of random states per check.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// auto, canonical, weyl, pair, or an ensemble file.
    #[arg(long, default_value = "auto")]
    pub ensemble: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Mode::Quantum)]
    pub mode: Mode,
    /// Quantum: a bipartite state (default bell). Classical: correlated,
    /// uncorrelated or classical:p00,p01,p10,p11 (default correlated).
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = DecoderArg::Bell)]
    pub decoder: DecoderArg,
    /// auto, canonical, weyl, pair, or an ensemble file.
    #[arg(long, default_value = "auto")]
    pub ensemble: String,
    /// Classical protocol without the shared key.
    #[arg(long)]
    pub no_key: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EntanglementArgs {
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Smallest rotation step of the local descent.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Number of decomposition terms; defaults to min(r^2, 2r).
    #[arg(long)]
    pub terms: Option<usize>,
    /// Include the best decomposition in the report.
    #[arg(long)]
    pub decomposition: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("DENSECAP_THREADS") else {
        return Ok(());
    };
    let n: usize = value.trim().parse().map_err(|_| {
        CliError::Parse(format!("DENSECAP_THREADS={value:?} is not a thread count"))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Parse(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Capacity(args) => commands::capacity::run(&args),
        Command::Verify(args) => commands::verify::run(&args),
        Command::Simulate(args) => commands::simulate::run(&args),
        Command::Entanglement(args) => commands::entanglement::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("densecap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
