//! `fpbl`: counts, partition functions, fixed-point laws, samples, limit-law
//! checks and asymptotic tables for biased pattern-avoiding permutations.

mod commands;
mod config;
mod table;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use fpbl_core::rational::parse_q;
use fpbl_core::Pattern3;

#[derive(Parser, Debug)]
#[command(
    name = "fpbl",
    version,
    about = "Fixed points of biased pattern-avoiding permutations"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed of the random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Stream id of the random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub stream: u64,
    /// Computation mode; every subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<Mode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Exact integers and rationals (polynomials for `zn` without `--q`).
    Exact,
    /// Exact evaluation at a fixed rational q.
    Eval,
    /// Double precision with rescaled coefficients.
    ScaledFloat,
    /// Seeded Monte-Carlo estimate.
    MonteCarlo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Eval => "eval",
            Mode::ScaledFloat => "scaled-float",
            Mode::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    /// Fixed-point counts only.
    Fp,
    /// Whole permutations.
    Perm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AsymKind {
    /// Z_n against the Lemma 1 prediction.
    Lemma1,
    /// Factorial moments against their leading-order prediction.
    Moments,
    /// Distance to a limit law.
    Distance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExploreTable {
    Moments,
    Pmf,
}

fn q_arg(s: &str) -> std::result::Result<BigRational, String> {
    parse_q(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Counts a_{k,n} of permutations with k fixed points.
    Count {
        #[arg(long)]
        n: usize,
        /// Avoided pattern; all of S_n when absent.
        #[arg(long)]
        tau: Option<Pattern3>,
    },
    /// Partition functions Z_n(q, tau) for every length up to n.
    Zn {
        #[arg(long)]
        n: usize,
        /// Bias; without it the exact polynomials in q are emitted.
        #[arg(long, value_parser = q_arg)]
        q: Option<BigRational>,
        #[arg(long)]
        tau: Option<Pattern3>,
    },
    /// The fixed-point law under the biased measure.
    Pmf {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = q_arg, default_value = "1")]
        q: BigRational,
        #[arg(long)]
        tau: Option<Pattern3>,
        /// Monte-Carlo sample size.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Draws from the biased measure.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = q_arg, default_value = "1")]
        q: BigRational,
        #[arg(long)]
        tau: Option<Pattern3>,
        /// Number of draws.
        #[arg(long, default_value_t = 1000)]
        count: u64,
        #[arg(long, value_enum, default_value_t = Emit::Fp)]
        emit: Emit,
    },
    /// Checks a limit theorem or Lemma 1 against the configured tolerances.
    #[command(group(ArgGroup::new("target").required(true).args(["theorem", "lemma1"])))]
    Verify {
        /// Theorem 1..=5.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        theorem: Option<u8>,
        /// Check the growth of Z_n instead of a limit law.
        #[arg(long)]
        lemma1: bool,
        #[arg(long, value_parser = q_arg)]
        q: BigRational,
        /// One length or a comma-separated grid.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Monte-Carlo sample size.
        #[arg(long)]
        samples: Option<u64>,
        /// Threshold overriding the configured default.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Convergence tables against the asymptotic predictions.
    Asym {
        #[arg(long, value_enum)]
        kind: AsymKind,
        #[arg(long, value_parser = q_arg)]
        q: BigRational,
        /// Factorial moment order.
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Theorem for distance tables.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        theorem: Option<u8>,
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Brute-force fixed-point tables for small n.
    Explore {
        #[arg(long)]
        tau: Pattern3,
        #[arg(long)]
        n_max: usize,
        /// One bias or a comma-separated grid.
        #[arg(long, value_delimiter = ',', value_parser = q_arg, default_value = "1")]
        q: Vec<BigRational>,
        #[arg(long, value_enum, default_value_t = ExploreTable::Moments)]
        table: ExploreTable,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome> {
    let g = &cli.global;
    match cli.command {
        Command::Count { n, tau } => commands::count(g, n, tau),
        Command::Zn { n, q, tau } => commands::zn(g, n, q, tau),
        Command::Pmf { n, q, tau, samples } => commands::pmf(g, n, q, tau, samples),
        Command::Sample {
            n,
            q,
            tau,
            count,
            emit,
        } => commands::sample(g, n, q, tau, count, emit),
        Command::Verify {
            theorem,
            q,
            n,
            samples,
            tolerance,
            ..
        } => match theorem {
            Some(t) => commands::verify_theorem(g, t, q, &n, samples, tolerance),
            None => commands::verify_lemma1(g, q, &n, tolerance),
        },
        Command::Asym {
            kind,
            q,
            m,
            theorem,
            n,
        } => commands::asym(g, kind, q, m, theorem, &n),
        Command::Explore {
            tau,
            n_max,
            q,
            table,
        } => commands::explore(g, tau, n_max, &q, table),
    }
}

fn emit(g: &GlobalArgs, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let global = cli.global.clone();
    let outcome = run(cli).and_then(|o| emit(&global, &o.text).map(|()| o));
    match outcome {
        Ok(o) => {
            for note in &o.notes {
                eprintln!("{note}");
            }
            for check in &o.checks {
                eprintln!("{}", check.line);
            }
            if o.checks.iter().all(|c| c.pass) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
