//! `kaczmarz`: run single-sequence, pair, and augmented iterations from
//! JSON configs, diagnose pairs, replay the built-in examples, and sweep
//! perturbed bases. Exit codes are part of the contract: 0 success, 1
//! invalid input, 2 negative verdict, 3 numerical failure.

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Failure that maps onto the exit-code contract: code 1 for input the tool
/// refuses, code 3 for computations that break down on valid input.
/// Negative verdicts (exit 2) are ordinary command results, not failures.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: String) -> Self {
        Failure { code: 1, message }
    }

    pub fn numerical(message: String) -> Self {
        Failure { code: 3, message }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Single-sequence iteration over `e`.
    Classic,
    /// Pair iteration: coefficients against `phi`, updates along `psi`.
    Dual,
    /// Two-track iteration that synthesizes with a derived dual sequence.
    Augmented,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    /// Sign-flipping pair on the standard basis: one pass lands on -x.
    Obs14,
    /// Two-dimensional pair converging forward, cycling in reverse.
    Obs15,
    /// Pair with vanishing errors but a non-positive Grammian.
    Obs16,
    /// Finite non-orthogonal basis with its biorthogonal dual.
    Obs17finite,
}

#[derive(Parser)]
#[command(
    name = "kaczmarz",
    version,
    about = "Kaczmarz iteration runs, pair diagnostics, example replays, perturbation sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an iteration from a config; writes trace.csv and verdict.json.
    Run {
        /// Problem config (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Algorithm override; defaults to classic for `e` configs and dual
        /// for `phi` configs.
        #[arg(long, value_enum)]
        algorithm: Option<Algorithm>,
        /// Seed override for any randomness (target draw when `x` absent).
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; beats KACZMARZ_OUT_DIR, then the current dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Effectiveness, Grammian, section, and frame-bound report for a pair;
    /// writes diagnose.json and grammian.csv.
    Diagnose {
        #[arg(long)]
        config: PathBuf,
        /// Seed override for the oracle's probe vectors.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; beats KACZMARZ_OUT_DIR, then the current dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a built-in example against its closed-form expectations;
    /// writes reproduce.json.
    Reproduce {
        #[arg(value_enum)]
        example: Example,
        /// Output directory; beats KACZMARZ_OUT_DIR, then the current dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perturb an orthonormal basis over a magnitude grid and report
    /// one-period radii; writes sweep.csv.
    Sweep {
        /// Base config; must list an orthonormal `e`.
        #[arg(long)]
        config: PathBuf,
        /// Perturbation magnitudes.
        #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1,0.2")]
        deltas: Vec<f64>,
        /// Trials per magnitude.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Seed override for the per-cell draws.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory; beats KACZMARZ_OUT_DIR, then the current dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Run {
            config,
            algorithm,
            seed,
            out,
        } => commands::run::execute(&config, algorithm, seed, out),
        Command::Diagnose { config, seed, out } => commands::diagnose::execute(&config, seed, out),
        Command::Reproduce { example, out } => commands::reproduce::execute(example, out),
        Command::Sweep {
            config,
            deltas,
            trials,
            seed,
            out,
        } => commands::sweep::execute(&config, &deltas, trials, seed, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests land here too; only genuine usage
            // errors count as invalid input.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = std::panic::catch_unwind(|| dispatch(cli));
    match outcome {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(failure)) => {
            eprintln!("kaczmarz: {}", failure.message);
            ExitCode::from(failure.code)
        }
        Err(_) => {
            eprintln!("kaczmarz: numerical failure (internal invariant violated)");
            ExitCode::from(3)
        }
    }
}
