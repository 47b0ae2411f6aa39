//! `admissible`: command-line frontend for admissible-core.
//!
//! Exit codes: 0 on success, holds, admissible or realizable; 1 on fails,
//! not admissible, unrealizable, unverified or disagreement; 2 on usage,
//! input and unsupported-query errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "admissible",
    version,
    about = "Admissible strategies in quantitative graph games"
)]
pub struct Cli {
    /// Print structured JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Antagonistic, cooperative and antagonistic-cooperative values
    Values { game: PathBuf },
    /// Decide whether a finite-memory strategy is admissible
    Check { game: PathBuf, strategy: PathBuf },
    /// Construct a strongly cooperative-optimal (admissible) strategy
    Sco {
        game: PathBuf,
        #[arg(long)]
        player: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Construct and verify a worst-case cooperative-optimal candidate
    Wco {
        game: PathBuf,
        #[arg(long)]
        player: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Parity automaton of the outcomes compatible with admissible strategies
    Outcomes {
        game: PathBuf,
        #[arg(long)]
        player: usize,
        #[arg(long, value_enum, default_value = "native")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Model checking under admissibility
    Mc {
        game: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Assume-admissible synthesis
    Synth {
        game: PathBuf,
        #[arg(long)]
        player: usize,
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare solver values with brute force over memoryless profiles
    Oracle { game: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Native,
    Dot,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
