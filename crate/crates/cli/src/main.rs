use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

mod run;

#[derive(Parser, Debug)]
#[command(
    name = "fdrepair",
    version,
    about = "Repair tables that violate functional dependencies"
)]
struct Cli {
    /// Worker threads for independent sub-problems.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify an FD set and report its structural metrics.
    Classify {
        #[arg(long)]
        fds: PathBuf,
        /// Attribute order; a comma-separated list or a table header.
        #[arg(long)]
        schema: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compute a subset or update repair.
    Repair(RepairArgs),
    /// List FD violations. Exits 1 when there are any.
    Verify {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        fds: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Most probable consistent subset of a table whose weights are
    /// probabilities.
    Mpd {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        fds: PathBuf,
        /// Enumerate all subsets instead of using the reduction.
        #[arg(long)]
        brute: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Generate test instances.
    Gen(GenArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    SubsetExact,
    SubsetApprox,
    SubsetBrute,
    Update,
    UpdateBrute,
}

#[derive(Args, Debug)]
struct RepairArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long)]
    table: PathBuf,
    #[arg(long)]
    fds: PathBuf,
    /// Repaired table CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Change log CSV (update modes).
    #[arg(long)]
    changes: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Gadget {
    VertexCover,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Delta,
    DeltaPrime,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(ArgGroup::new("kind").required(true).args(["gadget", "family", "random"])))]
struct GenArgs {
    #[arg(long, value_enum, requires = "edges")]
    gadget: Option<Gadget>,
    /// Edge list such as `u-v,v-w`; a bare name adds an isolated vertex.
    #[arg(long)]
    edges: Option<String>,

    #[arg(long, value_enum, requires = "k")]
    family: Option<Family>,
    #[arg(long)]
    k: Option<usize>,

    /// Random table and FD set.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    tuples: usize,
    #[arg(long, default_value_t = 3)]
    attrs: usize,
    #[arg(long, default_value_t = 3)]
    domain: usize,
    /// Comma-separated weights to draw from.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    weights: Vec<f64>,
    /// FD sets to draw from, separated by blank lines.
    #[arg(long)]
    catalog: Option<PathBuf>,

    #[arg(long)]
    out_table: Option<PathBuf>,
    #[arg(long)]
    out_fds: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run::dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
