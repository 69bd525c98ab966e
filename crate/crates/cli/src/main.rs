//! `subcouple`: command-line access to couplings, tensor products, quotients, minimization
//! and the universal coverage construction.
//!
//! Results are printed as JSON on stdout (or written with `-o`), with a one-line summary
//! on stderr. Exit codes: 0 when a check holds or a construction succeeds, 1 when a
//! check fails (the witness is printed), 2 on usage, input or capacity errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "subcouple", version, about = "Couplings and tensor products of submodular functions and matroids")]
struct Cli {
    /// Worker threads for parallel scans (defaults to all cores)
    #[arg(long, global = true, env = "SUBCOUPLE_THREADS")]
    threads: Option<usize>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Replace the ground-set cap of certification, Ingleton and brute-force minimization
    #[arg(long, global = true, value_name = "N")]
    unsafe_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check a property of a function, matroid, coupling or witness
    Check(CheckArgs),
    /// Build a coupling of two functions or matroids
    Couple(CoupleArgs),
    /// Build a tensor product
    Tensor(TensorArgs),
    /// Decompose a coverage function into extremal functions
    Decompose(FileArg),
    /// Quotient of a function by a partition of its ground set
    Quotient(QuotientArgs),
    /// Realize a normalized coverage function as a quotient of the universal one
    Universal(FileArg),
    /// Minimize a submodular function
    Minimize(MinimizeArgs),
    /// Expand an integer polymatroid into a matroid with parallel copies
    Expand(FileArg),
    /// Check the matroid rank axioms
    Certify(FileArg),
}

#[derive(Args)]
pub struct FileArg {
    pub input: PathBuf,
    /// Write the result here instead of stdout
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckProperty {
    Normalized,
    Increasing,
    Decreasing,
    Submodular,
    Supermodular,
    Modular,
    Polymatroid,
    KPolymatroid,
    Matroid,
    KAlternating,
    Coverage,
    Ingleton,
    Coupling,
    Tensor,
    Universal,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub property: CheckProperty,
    /// Input files: one function, or `phi f1 f2` for coupling and tensor checks
    #[arg(required = true, num_args = 1..=3)]
    pub inputs: Vec<PathBuf>,
    /// Order for k-alternating checks, or the multiple for k-polymatroid checks
    #[arg(long)]
    pub k: Option<String>,
    /// Let every A_i range over all subsets in the k-alternating check
    #[arg(long)]
    pub full: bool,
    /// Only pairwise disjoint quadruples in the Ingleton check
    #[arg(long)]
    pub disjoint_only: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoupleKind {
    Submodular,
    Polymatroid,
    Matroid,
    Amalgam,
}

#[derive(Args)]
pub struct CoupleArgs {
    #[arg(long, value_enum)]
    pub kind: CoupleKind,
    pub f1: PathBuf,
    pub f2: PathBuf,
    /// Weights for the first factor (`{"weights": [...]}`); defaults to the greedy base vertex
    #[arg(long)]
    pub mu1: Option<PathBuf>,
    #[arg(long)]
    pub mu2: Option<PathBuf>,
    /// Basis of the first matroid as comma-separated labels; defaults to the greedy basis
    #[arg(long)]
    pub basis1: Option<String>,
    #[arg(long)]
    pub basis2: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TensorKind {
    Coverage,
    Kronecker,
}

#[derive(Args)]
pub struct TensorArgs {
    #[arg(long, value_enum)]
    pub kind: TensorKind,
    pub f1: PathBuf,
    pub f2: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct QuotientArgs {
    pub input: PathBuf,
    /// Classes as comma-separated labels separated by semicolons, e.g. "a,b;c"
    #[arg(long)]
    pub classes: String,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct MinimizeArgs {
    pub input: PathBuf,
    #[arg(long, default_value = "minnorm")]
    pub algorithm: String,
    /// Only consider supersets of these comma-separated labels
    #[arg(long)]
    pub superset_of: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli.command, cli.unsafe_cap) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
