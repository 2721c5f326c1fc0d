//! `nearderiv`: batch front end for the derived-operation engine.
//!
//! Exit status is 0 when every check passes, 1 when a mathematical check
//! fails (the report carries the witness) and 2 on input errors.

mod commands;
mod example;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nearderiv::analysis::{DEFAULT_EXACT_LIMIT, DEFAULT_SEED, SEED_ENV};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "nearderiv",
    version,
    about = "Derived operations, near-derivations and compatible brackets"
)]
struct Cli {
    /// Print reports as JSON (the default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Print reports as indented text.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct Pair {
    /// Algebra file (structure constants).
    pub algebra: PathBuf,
    /// Operator file (square matrix).
    pub operator: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RankMode {
    Exact,
    #[value(alias = "probabilistic")]
    Prob,
}

#[derive(Args, Debug)]
pub struct IndexOpts {
    /// How the generic rank of the structure matrix is computed.
    #[arg(long, value_enum, default_value = "prob")]
    pub mode: RankMode,
    /// Largest dimension accepted by the exact mode.
    #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
    pub max_dim: usize,
    /// Seed for probabilistic rank sampling.
    #[arg(long, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify an operator and check the members of its pencil.
    Classify(Pair),
    /// Print the derived operation `ρ(D)^k·T` as an algebra file.
    Derive {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 1)]
        power: usize,
        /// Write the algebra file here instead of printing a report.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Normalise the pencil of a near-derivation.
    Pencil(Pair),
    /// Index, centre and lower central series of an algebra, or of the
    /// derived algebra when an operator is given.
    Index {
        algebra: PathBuf,
        #[arg(long)]
        operator: Option<PathBuf>,
        #[command(flatten)]
        opts: IndexOpts,
    },
    /// Nijenhuis torsion and its decomposition identity.
    Torsion(Pair),
    /// Nijenhuis test with the power properties up to `--depth`.
    NijenhuisCheck {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Exponential identity of a Nijenhuis operator or near-derivation.
    ExpCheck {
        #[command(flatten)]
        pair: Pair,
        /// Comma-separated rational sample points.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        points: Option<Vec<String>>,
    },
    /// Generate a Poisson-commutative family from central seeds and verify it.
    PcCheck {
        algebra: PathBuf,
        /// Operator whose lift generates the orbit.
        operator: Option<PathBuf>,
        /// Covector for directional derivatives instead of an operator.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "operator")]
        direction: Option<Vec<String>>,
        /// Seed polynomials; the centre up to `--degree-bound` otherwise.
        #[arg(long)]
        seed_file: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
    },
    /// Write example algebra and operator files.
    Example(example::ExampleArgs),
    /// Every check on an (algebra, operator) pair in a single document.
    Report {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        opts: IndexOpts,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        degree_bound: u32,
        #[arg(long)]
        seed_file: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> anyhow::Result<output::Report> {
    match cli.command {
        Command::Classify(pair) => commands::classify(&pair),
        Command::Derive { pair, power, output } => commands::derive(&pair, power, output.as_deref()),
        Command::Pencil(pair) => commands::pencil(&pair),
        Command::Index {
            algebra,
            operator,
            opts,
        } => commands::index(&algebra, operator.as_deref(), &opts),
        Command::Torsion(pair) => commands::torsion(&pair),
        Command::NijenhuisCheck { pair, depth } => commands::nijenhuis_check(&pair, depth),
        Command::ExpCheck { pair, points } => commands::exp_check(&pair, points.as_deref()),
        Command::PcCheck {
            algebra,
            operator,
            direction,
            seed_file,
            degree_bound,
        } => commands::pc_check(
            &algebra,
            operator.as_deref(),
            direction.as_deref(),
            seed_file.as_deref(),
            degree_bound,
        ),
        Command::Example(args) => example::run(&args),
        Command::Report {
            pair,
            opts,
            depth,
            degree_bound,
            seed_file,
        } => commands::report(&pair, &opts, depth, degree_bound, seed_file.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = if cli.text { Format::Text } else { Format::Json };
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(input::exit_code(&err))
        }
    }
}
