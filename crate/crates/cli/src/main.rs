//! `hyperop`: hyperoperations, biprime towers and rank-r divisibility from
//! the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 domain error, 3 budget
//! exceeded (including `--max-digits` refusals), 4 a counterexample or failed
//! oracle cross-check.

mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hyperop::{EvalBudget, Natural};

use crate::commands::Ctx;
use crate::error::CliError;
use crate::output::Renderer;

#[derive(Parser, Debug)]
#[command(
    name = "hyperop",
    version,
    about = "Hyperoperations, biprime towers and rank-r divisibility"
)]
struct Cli {
    /// Largest result, in bits, any evaluation may build.
    #[arg(long, global = true, env = "HYPEROP_BUDGET_BITS",
          default_value_t = EvalBudget::DEFAULT_MAX_RESULT_BITS,
          value_parser = clap::value_parser!(u64).range(EvalBudget::MIN_RESULT_BITS..))]
    budget_bits: u64,

    /// Largest number of recursion or search steps per operation.
    #[arg(long, global = true, env = "HYPEROP_BUDGET_STEPS",
          default_value_t = EvalBudget::DEFAULT_MAX_STEPS,
          value_parser = clap::value_parser!(u64).range(1u64..))]
    budget_steps: u64,

    /// One JSON record per line instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Refuse (exit 3) to print any number with more than N decimal digits.
    #[arg(long, global = true, value_name = "N")]
    max_digits: Option<usize>,

    /// Cross-check every result against the brute-force oracles.
    #[arg(long, global = true)]
    verify: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate H_r(a, x).
    Eval {
        #[arg(short, long)]
        rank: u32,
        #[arg(value_parser = parse_natural)]
        a: Natural,
        #[arg(value_parser = parse_natural)]
        x: Natural,
    },
    /// Factor M into its unique tower of biprimes, or into r-prime components
    /// with --rank r (r >= 3).
    Factor {
        #[arg(value_parser = parse_natural)]
        m: Natural,
        #[arg(short, long)]
        rank: Option<u32>,
    },
    /// Classify M, or every number in LO..HI (inclusive), as r-prime or
    /// r-compound.
    Classify {
        #[arg(short, long)]
        rank: u32,
        #[arg(value_name = "M|LO..HI")]
        target: String,
        /// Append prime and compound counts.
        #[arg(long)]
        stats: bool,
    },
    /// Decide whether D is an r-divisor of A.
    Divisor {
        #[arg(short, long)]
        rank: u32,
        #[arg(value_parser = parse_natural)]
        d: Natural,
        #[arg(value_parser = parse_natural)]
        a: Natural,
    },
    /// Decide whether A and B are r-coprime.
    Coprime {
        #[arg(short, long)]
        rank: u32,
        #[arg(value_parser = parse_natural)]
        a: Natural,
        #[arg(value_parser = parse_natural)]
        b: Natural,
    },
    /// Greatest common r-divisor of A and B.
    Gcd {
        #[arg(short, long)]
        rank: u32,
        #[arg(value_parser = parse_natural)]
        a: Natural,
        #[arg(value_parser = parse_natural)]
        b: Natural,
    },
    /// Scan every r-compound number up to N_MAX for non-unique factorizations.
    Hypothesis {
        #[arg(short, long)]
        rank: u32,
        #[arg(value_parser = parse_natural)]
        n_max: Natural,
        /// Write the report here instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn parse_natural(s: &str) -> Result<Natural, String> {
    s.parse()
        .map_err(|_| format!("{s:?} is not a natural number in decimal"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let budget = EvalBudget::new(cli.budget_bits, cli.budget_steps)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = Renderer::new(cli.json, cli.max_digits);
    let mut ctx = Ctx {
        budget,
        verify: cli.verify,
        out: &mut out,
    };
    let result = match &cli.command {
        Command::Eval { rank, a, x } => commands::eval(&mut ctx, *rank, a, x),
        Command::Factor { m, rank } => commands::factor(&mut ctx, m, *rank),
        Command::Classify {
            rank,
            target,
            stats,
        } => commands::classify(&mut ctx, *rank, target, *stats),
        Command::Divisor { rank, d, a } => commands::divisor(&mut ctx, *rank, d, a),
        Command::Coprime { rank, a, b } => commands::coprime(&mut ctx, *rank, a, b),
        Command::Gcd { rank, a, b } => commands::gcd(&mut ctx, *rank, a, b),
        Command::Hypothesis { rank, n_max, out } => {
            commands::hypothesis(&mut ctx, *rank, n_max, out.as_deref())
        }
    };
    // Records already emitted stay valid even when a later one fails.
    out.flush()?;
    result
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
