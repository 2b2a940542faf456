//! `oh`: command-line front end to oh-core.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use oh_core::Error;

#[derive(Debug, Parser)]
#[command(name = "oh", version, about = "Weighted Orlicz-space numerics and Dunkl-Hausdorff weight-condition checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// N-function reports.
    Nfunc {
        #[command(subcommand)]
        action: NfuncAction,
    },
    /// Luxemburg norm of a declared function against the pair's Phi and v.
    Norm {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        function: String,
        /// Append the result as a JSON line to this file.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Operator application on a grid-function CSV.
    Op {
        #[command(subcommand)]
        action: OpAction,
    },
    /// Minimal constants of the weight conditions of a theorem (or one condition).
    Conditions {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        theorem: String,
        /// Write the per-point table here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Full verification report for a theorem.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Duality gap table for the declared functions.
    Duality {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Restrict the table to one function.
        #[arg(long)]
        function: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum NfuncAction {
    /// Delta2, order and conjugate report.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum OpAction {
    Apply {
        /// Needed for the Dunkl-Hausdorff operators and for an output grid.
        #[arg(long)]
        config: Option<PathBuf>,
        /// dunkl, adjoint, hardy, hardy-adj, calderon, S, K, Kstar (also H, Hstar, Sstar).
        #[arg(long)]
        op: String,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Which {
    Plain,
    Sawyer,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Hypothesis(_) | Error::Domain(_) => 1,
        Error::Numerical(_) | Error::Range(_) => 2,
        Error::Config(_) | Error::InvalidFunction(_) | Error::Io(_) => 3,
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("OH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("OH_THREADS must be a positive integer, got '{raw}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("cannot size the worker pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Error> {
    configure_threads()?;
    match cli.command {
        Command::Nfunc { action: NfuncAction::Check { config } } => commands::nfunc_check(&config),
        Command::Norm { config, function, report } => commands::norm(&config, &function, report.as_deref()),
        Command::Op { action: OpAction::Apply { config, op, input, output } } => {
            commands::op_apply(config.as_deref(), &op, &input, &output)
        }
        Command::Conditions { config, theorem, csv } => commands::conditions(&config, &theorem, csv.as_deref()),
        Command::Verify { config, theorem, seed } => commands::verify(&config, &theorem, seed),
        Command::Duality { config, which, function } => commands::duality(&config, which, function.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
