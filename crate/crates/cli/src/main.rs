mod commands;
mod failure;
mod inputs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use quadembed::embedding::DEFAULT_HORIZON;
use quadembed::groups::DEFAULT_FREE_RADIUS;

use failure::{Failure, EXIT_USAGE};
use inputs::BackendKind;

/// Embeds countable groups into two-generator groups while keeping track of
/// solvable quadratic equations, and checks each step symbolically.
#[derive(Debug, Parser)]
#[command(name = "quadembed", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build G1, G2 and the presentation over h1, h2 for the first N solvable equations.
    Embed(EmbedArgs),
    /// Decide one quadratic equation in the group.
    Solve(SolveArgs),
    /// List solvable quadratic equations in enumeration order.
    Enumerate(EnumerateArgs),
    /// Print a coding word V_i, or its run statistics.
    Vword(VwordArgs),
    /// Check that coding words share no long subwords.
    CheckSc(CheckScArgs),
    /// Euler characteristic, faces and the edge bound of combinatorial maps.
    CheckMap(CheckMapArgs),
    /// Re-check an embedding directory, or a solution of one equation.
    Verify(VerifyArgs),
    /// Map words of G1 back to the group along the stored solutions.
    Retract(RetractArgs),
}

#[derive(Debug, Args)]
struct GroupArgs {
    /// Group file: table JSON, free presentation, or oracle list.
    #[arg(long)]
    group: PathBuf,
    #[arg(long, value_enum, default_value_t = BackendKind::Table)]
    backend: BackendKind,
    /// Word length bound for witness search in free groups.
    #[arg(long, default_value_t = DEFAULT_FREE_RADIUS)]
    radius: usize,
}

#[derive(Debug, Args)]
struct EmbedArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Presentation of the group; derived from the table when omitted.
    #[arg(long)]
    presentation: Option<PathBuf>,
    /// Variable budget (even, at least 2).
    #[arg(long)]
    n: u32,
    /// Number of solvable equations to encode.
    #[arg(long)]
    count: usize,
    /// Longest equation considered.
    #[arg(long)]
    cap: usize,
    /// Largest index checked for small cancellation before building.
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    horizon: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Equation word, e.g. `x1.a1.x1^-1.a1`.
    #[arg(long = "eq")]
    equation: String,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    count: usize,
    #[arg(long)]
    cap: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VwordArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    i: u64,
    #[arg(long)]
    stats: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckScArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    max_i: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CheckMapArgs {
    /// Map JSON: {"darts": 2E, "rotation": [...], "pairing": [...]}.
    #[arg(long, conflicts_with_all = ["random", "builtin"])]
    file: Option<PathBuf>,
    #[arg(long, value_parser = ["k4", "icosahedron"], conflicts_with = "random")]
    builtin: Option<String>,
    /// Sweep seeded random maps instead of reading one.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    #[arg(long, default_value_t = 8)]
    max_vertices: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Output directory of `embed`.
    #[arg(long, conflicts_with_all = ["equation", "solution"])]
    dir: Option<PathBuf>,
    #[arg(long, required_unless_present = "dir")]
    group: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = BackendKind::Table)]
    backend: BackendKind,
    #[arg(long = "eq", requires = "solution")]
    equation: Option<String>,
    /// Assignments such as `x1=a1.a2,x2=e`, or element names or indices for tables.
    #[arg(long, requires = "equation")]
    solution: Option<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RetractArgs {
    /// Output directory of `embed`.
    #[arg(long)]
    dir: PathBuf,
    #[command(flatten)]
    group: GroupArgs,
    /// Word over a- and x-letters; every relator of G1 is checked when omitted.
    #[arg(long)]
    word: Option<String>,
    #[arg(long)]
    json: bool,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("QUADEMBED_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::input(format!("QUADEMBED_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::input(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    configure_threads()?;
    match cli.command {
        Command::Embed(a) => commands::embed(a),
        Command::Solve(a) => commands::solve(a),
        Command::Enumerate(a) => commands::enumerate(a),
        Command::Vword(a) => commands::vword(a),
        Command::CheckSc(a) => commands::check_sc(a),
        Command::CheckMap(a) => commands::check_map(a),
        Command::Verify(a) => commands::verify(a),
        Command::Retract(a) => commands::retract(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
