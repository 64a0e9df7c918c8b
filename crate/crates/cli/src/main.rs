mod commands;
mod display;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sumprod_core::Error;

#[derive(Parser)]
#[command(name = "sumprod", version, about = "Exact sum-product statistics, inequality checks and extremal search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Set sizes, energies, the ratio spectrum and the doubling profile.
    Stats {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate registry inequalities on a set.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated ids; all entries when omitted.
        #[arg(long)]
        ids: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Search for sets extremising a registry ratio and append the best to the corpus.
    Explore {
        #[arg(long)]
        ineq: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        budget: u64,
        /// Required for hillclimb.
        #[arg(long)]
        seed: Option<u64>,
        /// Candidate elements; `{1, …, 4n}` when omitted.
        #[arg(long)]
        ground: Option<PathBuf>,
        /// Defaults to $SUMPROD_CORPUS, then `corpus.jsonl`.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        restarts: u32,
        #[arg(long, value_enum)]
        direction: Option<Dir>,
        #[arg(long)]
        json: bool,
    },
    /// Run a brute-force oracle and compare it with the fast path.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        op: OracleOp,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Hillclimb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    Min,
    Max,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleOp {
    EnergyBrute,
    TriplesBrute,
    SigmaMaxSample,
}

/// Process exit statuses.
mod exit {
    pub const USAGE: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const EXPLICIT_FAIL: u8 = 3;
    pub const ORACLE_MISMATCH: u8 = 4;
    pub const RESOURCE: u8 = 5;
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Resource(_) => exit::RESOURCE,
        Error::UnknownId(_) => exit::USAGE,
        _ => exit::INPUT,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Stats { input, json } => commands::stats(&input, json),
        Command::Verify { input, ids, json } => commands::verify(&input, ids.as_deref(), json),
        Command::Explore { ineq, n, mode, budget, seed, ground, corpus, restarts, direction, json } => {
            commands::explore(commands::ExploreArgs {
                ineq,
                n,
                hillclimb: matches!(mode, Mode::Hillclimb),
                budget,
                seed,
                ground,
                corpus,
                restarts,
                maximize: direction.map(|d| matches!(d, Dir::Max)),
                json,
            })
        }
        Command::Oracle { input, op, seed } => commands::oracle(&input, op, seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
