use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Debug, Parser)]
#[command(
    name = "strongreal",
    version,
    about = "Strong reality of conjugacy classes in finite unitary groups"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report wall-clock time (in the report for `verify`, on stderr otherwise).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "K", alias = "k")]
    K,
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "T", alias = "t")]
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    Auto,
    Group,
    Representatives,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Auto,
    Entrywise,
    Closure,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide strong reality of one class.
    Classify {
        #[arg(long)]
        q: u64,
        /// Read a symplectic label (q odd) instead of a unitary one.
        #[arg(long)]
        sp: bool,
        /// Class datum JSON file.
        #[arg(
            long,
            conflicts_with = "unipotent",
            required_unless_present = "unipotent"
        )]
        datum: Option<PathBuf>,
        /// Unipotent type as a partition, e.g. "5,3,2,2" or "5,3,2^2".
        #[arg(long)]
        unipotent: Option<String>,
    },
    /// Table of total, real and strongly real class counts (q odd).
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long = "n-max")]
        n_max: usize,
    },
    /// Stream the class data of U(n, q).
    List {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// all, real, or strongly_real.
        #[arg(long, default_value = "all")]
        filter: String,
    },
    /// Coefficients of a generating function.
    Series {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum)]
        which: Which,
    },
    /// An explicit unitary matrix in a given class.
    Realize {
        #[arg(long)]
        q: u64,
        /// Class datum JSON file.
        #[arg(
            long,
            conflicts_with = "unipotent",
            required_unless_present = "unipotent"
        )]
        datum: Option<PathBuf>,
        #[arg(long)]
        unipotent: Option<String>,
        /// Block sizes of an anti-diagonal form, e.g. "3,1"; identity form if absent.
        #[arg(long)]
        form: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reconcile the classifier with brute force on every class of U(n, q).
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Search budget (candidates per scan).
        #[arg(long, env = "STRONGREAL_BUDGET")]
        budget: Option<u128>,
        #[arg(long, value_enum, default_value_t = PathArg::Auto)]
        path: PathArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
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
    let start = Instant::now();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = commands::run(&cli.command, cli.format, cli.timing, &mut out);
    let flushed = out.flush();
    if cli.timing && !matches!(cli.command, Command::Verify { .. }) {
        eprintln!("elapsed_ms: {}", start.elapsed().as_millis());
    }
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Ok(()), Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        (Err(f), _) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
