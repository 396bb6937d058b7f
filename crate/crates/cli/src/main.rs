//! `toric`: build toric codes from job files, compute their parameters and
//! bounds, decode received words, and regress the published tables.
//!
//! Exit codes: 0 success, 2 input validation, 3 computation error,
//! 4 golden or closed-form mismatch.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use toric_core::code::Method;

mod commands;
mod job;
mod output;

use output::Format;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Compute(String),
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Compute(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
            CliError::Mismatch(m) => write!(f, "mismatch:\n{m}"),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Auto,
    Exhaustive,
    Infoset,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::Exhaustive => Method::Exhaustive,
            MethodArg::Infoset => Method::InfoSet,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "toric", version, about = "Toric evaluation codes over finite fields")]
struct Cli {
    /// Output format for reports.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for distance search (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Maximum number of codewords a distance search may evaluate.
    #[arg(long, global = true)]
    work_cap: Option<f64>,
    /// Minimum-distance engine.
    #[arg(long, value_enum, global = true)]
    method: Option<MethodArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Construct a code from a job file and write its code file.
    Build {
        spec: String,
        /// Code file destination; printed to stdout when absent.
        #[arg(short, long)]
        output: Option<String>,
    },
    /// Minimum distance of a job or code file.
    Mindist { file: String },
    /// Parameter bounds and conjecture checks for a job or code file.
    Bounds { file: String },
    /// Decode a received word for the dual code.
    Decode {
        spec: String,
        /// Whitespace-separated element indices.
        received: String,
        /// Divisor G' as comma-separated coefficients; overrides `[decoder]`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        gprime: Option<Vec<i64>>,
    },
    /// Recompute a published table and diff it against the transcribed values.
    Reproduce {
        /// rm, hansen-b, fan1, fan2-m3, fan2-m5, fan2-m10, fan6, fan7 or all.
        table: String,
    },
    /// Reed-Muller code against its closed-form parameters.
    Rm {
        #[arg(short)]
        q: u32,
        #[arg(short)]
        m: u32,
        #[arg(short)]
        l: u32,
        /// Skip the minimum-distance computation.
        #[arg(long)]
        no_distance: bool,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let work_cap = match cli.work_cap {
        Some(x) if !(x >= 1.0 && x.is_finite()) => {
            return Err(CliError::Validation(format!("--work-cap: {x} is not a positive count")))
        }
        Some(x) => Some(x.min(u64::MAX as f64) as u64),
        None => None,
    };
    let method = cli.method.map(Method::from);
    let format = cli.format;
    let workers = cli.workers.or_else(|| match &cli.command {
        Command::Mindist { file } => commands::file_workers(file),
        _ => None,
    });
    if workers == Some(0) {
        return Err(CliError::Validation("--workers: must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Compute(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Build { spec, output } => commands::cmd_build(&spec, output.as_deref(), format),
        Command::Mindist { file } => commands::cmd_mindist(&file, method, work_cap, format),
        Command::Bounds { file } => commands::cmd_bounds(&file, method, work_cap, format),
        Command::Decode { spec, received, gprime } => commands::cmd_decode(&spec, &received, gprime, work_cap, format),
        Command::Reproduce { table } => commands::cmd_reproduce(&table, method, work_cap, format),
        Command::Rm { q, m, l, no_distance } => commands::cmd_rm(q, m, l, !no_distance, work_cap, format),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
