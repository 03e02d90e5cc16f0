mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use polyvol::volume::{Backend, DEFAULT_SEED};

#[derive(Parser)]
#[command(name = "polyvol", version, about = "Volumes, moments and extremal representations of polynomial sublevel sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of {g ≤ 1}.
    Volume {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Skip the finite-volume test.
        #[arg(long)]
        force: bool,
    },
    /// Every moment on the exponent lattice up to a total degree.
    Moments {
        file: PathBuf,
        /// Largest total degree, e.g. `4` or `1/2`.
        #[arg(long)]
        max_order: String,
        /// Lattice denominator of the exponents (defaults to the polynomial's).
        #[arg(long)]
        q: Option<u32>,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        force: bool,
    },
    /// Solve one of the extremal representation problems.
    Solve {
        problem: ProblemArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: String,
        #[arg(long, default_value_t = 1)]
        q: u32,
        /// Starting polynomial or Gram form.
        #[arg(long)]
        start: Option<PathBuf>,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check the optimality certificate of a candidate.
    Certify {
        file: PathBuf,
        /// Defaults to p3 for Gram forms, p2 for multinomial and p1 for monomial coefficients.
        #[arg(long)]
        problem: Option<ProblemArg>,
        /// Rescale the candidate to the L_d-ball volume first.
        #[arg(long)]
        rescale: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form volumes and axis moments of L_d unit balls.
    BallTable {
        /// Inclusive range such as `1..4`, or a single dimension.
        #[arg(long, default_value = "1..3")]
        n_range: String,
        /// Comma-separated degrees such as `1/2,1,2,4`.
        #[arg(long, default_value = "1/2,1,2,4")]
        d_list: String,
        #[command(flatten)]
        output: Output,
    },
    /// Points on the curve g = 1 (n = 2).
    Boundary {
        file: PathBuf,
        #[arg(long, default_value_t = 360)]
        count: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Common {
    /// Defaults to spherical for n ≤ 3 and mc above.
    #[arg(long)]
    backend: Option<BackendArg>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    tol: Option<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Spherical,
    Mc,
    Grid,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Spherical => Backend::Spherical,
            BackendArg::Mc => Backend::MonteCarlo,
            BackendArg::Grid => Backend::GridOracle,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    P1,
    P1q,
    P2,
    P3,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Some(msg) = &failure.message {
                eprintln!("polyvol: {msg}");
            }
            ExitCode::from(failure.code)
        }
    }
}
