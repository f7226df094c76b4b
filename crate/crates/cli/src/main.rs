use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod commands;
mod io;
mod verify;

use io::{parse_budget, parse_complex, parse_radii};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const DEFAULT_BUDGET: usize = 100_000;

/// Process outcome. The discriminant is the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Pass = 0,
    CheckFailed = 1,
    Usage = 2,
    Violation = 3,
    Precondition = 4,
}

/// A failure that ends the command with a message on stderr.
#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            exit: Exit::Usage,
            message: message.into(),
        }
    }

    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Self {
            exit,
            message: message.into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "normcrit", version, about = "Normality criteria and value-distribution checks for meromorphic families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a condition profile and report a witness family when inconclusive.
    Criterion(CriterionArgs),
    /// Value-distribution analysis of an exact rational function.
    Ratfun(RatfunArgs),
    /// Growth of the spherical derivative on nested disks.
    Probe(ProbeArgs),
    /// Ahlfors-Shimizu characteristic and order estimate.
    Order(OrderArgs),
    /// Rescaling trace with inherited-property checks.
    Zalcman(ZalcmanArgs),
    /// Run every registered example check and write a verification report.
    VerifyExamples(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct CriterionArgs {
    /// Profile JSON file.
    pub profile: PathBuf,
}

#[derive(Args, Debug)]
pub struct RatfunArgs {
    /// Rational function JSON file.
    pub function: PathBuf,
    #[arg(long, value_parser = ["b", "c"])]
    pub mode: String,
    /// Value with exactly one finite preimage (mode c).
    #[arg(long)]
    pub a1: Option<String>,
    /// Comma-separated exact values checked for total ramification.
    #[arg(long, value_delimiter = ',')]
    pub candidates: Vec<String>,
    #[arg(long, default_value_t = normcrit::ratfun::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Function of z in the expression grammar.
    #[arg(long = "expr")]
    pub expr: String,
    #[arg(long, value_parser = parse_budget, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, value_parser = io::parse_seed, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Report file, written atomically.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Disk center, "re" or "re,im".
    #[arg(long, value_parser = parse_complex, default_value = "0")]
    pub center: num_complex::Complex64,
    /// Radii as start:end[:step] or a comma list.
    #[arg(long, value_parser = parse_radii, default_value = "1:5")]
    pub radii: io::Radii,
    /// CSV of spherical-derivative samples on the largest disk.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Grid points per side for the CSV.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2.5)]
    pub r_min: f64,
    #[arg(long, default_value_t = 5.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 8)]
    pub steps: usize,
}

#[derive(Args, Debug)]
pub struct ZalcmanArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_parser = parse_complex, default_value = "0")]
    pub center: num_complex::Complex64,
    /// Number of rescaling steps.
    #[arg(long, default_value_t = 6)]
    pub steps: usize,
    /// First search radius.
    #[arg(long, default_value_t = 2.0)]
    pub r0: f64,
    /// Search radius increment per step.
    #[arg(long, default_value_t = 1.0)]
    pub dr: f64,
    /// Radius of the rescaled sampling grid.
    #[arg(long, default_value_t = 2.0)]
    pub xi: f64,
    /// Grid points per side.
    #[arg(long, default_value_t = 41)]
    pub grid: usize,
    #[arg(long, default_value_t = 3)]
    pub k_max: usize,
    /// Extra level values refined on the grid.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<String>,
    /// Values the limit must omit.
    #[arg(long, value_delimiter = ',')]
    pub omit: Vec<String>,
    /// Values b with g = b implying g' = rho b.
    #[arg(long = "b", value_delimiter = ',')]
    pub b_values: Vec<String>,
    /// Multiplicity conditions value:m[:M], repeatable.
    #[arg(long = "c", allow_hyphen_values = true)]
    pub c_values: Vec<String>,
    /// Radius for the bounded-blowup check.
    #[arg(long, default_value_t = 1.0)]
    pub blowup_xi: f64,
    #[arg(long, default_value_t = 0.2)]
    pub slack: f64,
    /// Chordal radius for omission checks.
    #[arg(long, default_value_t = 0.05)]
    pub omit_delta: f64,
    #[arg(long, default_value_t = normcrit::zalcman::DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, default_value_t = normcrit::zalcman::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = parse_budget, default_value_t = DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, value_parser = io::parse_seed, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var("NL_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Failure::usage(format!("NL_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("cannot configure thread pool: {e}")))
}

fn run(cli: Cli) -> Result<Exit, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Criterion(a) => commands::criterion(&a),
        Command::Ratfun(a) => commands::ratfun(&a),
        Command::Probe(a) => commands::probe(&a),
        Command::Order(a) => commands::order(&a),
        Command::Zalcman(a) => commands::zalcman(&a),
        Command::VerifyExamples(a) => verify::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Exit::Usage as u8 } else { Exit::Pass as u8 });
        }
    };
    match run(cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.exit as u8)
        }
    }
}
