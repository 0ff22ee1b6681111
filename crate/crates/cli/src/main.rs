//! `kothe`: exact diameter tables and criterion checks for `K_alpha`.
//!
//! Exit codes: 0 success, 1 a check came out `fail`, 2 invalid usage or
//! alpha spec, 3 horizon could not be certified, 4 file I/O, 5 internal
//! consistency check failed.

mod commands;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kothe::{Error, Verdict};

use output::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("{0}")]
    Usage(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    fn write(path: &Path, source: std::io::Error) -> Self {
        CliError::Write { path: path.to_path_buf(), source }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Csv(_) | CliError::Write { .. } => 4,
            CliError::Core(e) => match e {
                Error::UnknownAlphaSpec(_)
                | Error::ParseValue { .. }
                | Error::NotStrictlyIncreasing { .. }
                | Error::InvalidParameter(_)
                | Error::StableSequence(_)
                | Error::ZeroIndex => 2,
                Error::Uncertified { .. }
                | Error::NothingCertified { .. }
                | Error::PrefixExhausted { .. }
                | Error::SearchCapExhausted { .. } => 3,
                Error::Io(_) => 4,
                Error::NotMemoized { .. }
                | Error::CoverageGap { .. }
                | Error::CoverageOverlap { .. }
                | Error::SelfCheck(_) => 5,
            },
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "kothe", version, about = "Exact Kolmogorov diameters and criterion checks for the Köthe spaces K_alpha")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Output file; overrides the output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Directory receiving `<command>-<params>.<ext>` when `--out` is absent.
    #[arg(long, global = true, env = "KOTHE_OUT_DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pairing table, band elements or the s_k steps.
    Grid(GridArgs),
    /// Log-entries of the matrix a_{k,n} = exp(e(k,s) alpha_n).
    GenMatrix(MatrixArgs),
    /// Certified diameter table of the unit-ball pair (U_p, U_q).
    Diameters(DiameterArgs),
    /// One criterion check with witnesses.
    Check(CheckArgs),
    /// Checks over diameter tables for a list of pairs.
    Verify(VerifyArgs),
    /// -log d_n against alpha_{n+1}, for plotting.
    PlotData(PlotArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridTable {
    /// n, x, y, column, line
    Pairing,
    /// i, n_i over the band of columns p..q-1
    Band,
    /// k, s_k, n_{s_k}
    Steps,
}

#[derive(Args, Debug)]
pub struct GridArgs {
    #[arg(long, value_enum, default_value_t = GridTable::Pairing)]
    what: GridTable,
    #[arg(long, default_value_t = 50)]
    count: u64,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[arg(long, default_value = "linear")]
    alpha: String,
    /// Rows k = 1..=K.
    #[arg(long, default_value_t = 5)]
    rows: u64,
    /// Columns n = 1..=N.
    #[arg(long, default_value_t = 20)]
    cols: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Oracle,
    Closed,
    Both,
}

#[derive(Args, Debug)]
pub struct DiameterArgs {
    #[arg(long, default_value = "linear")]
    alpha: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
    /// Fixed oracle prefix length M; by default it grows until `count`
    /// diameters are certified.
    #[arg(long)]
    horizon: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Nuclearity,
    Dn,
    Omega,
    D2,
    Regularity,
    /// Finite-prefix stable/unstable classification.
    Stability,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    criterion: Criterion,
    #[arg(long, default_value = "linear")]
    alpha: String,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    /// Ω exponent (rational, default: the bound rounded up) or the (d2) column.
    #[arg(long, allow_hyphen_values = true)]
    j: Option<String>,
    /// DN exponent, rational; default half the admissible bound.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Horizon; default 10000 (5000 for regularity, 1000 for stability).
    #[arg(long = "N")]
    horizon: Option<u64>,
    /// Matrix rows used to cross-check regularity against its definition.
    #[arg(long, default_value_t = 8)]
    rows: u64,
    /// (d2) bound B, rational.
    #[arg(long, default_value = "1000000")]
    bound: String,
    /// (d2) search cap, in rows of the column.
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyWhat {
    Sandwich,
    Eadd,
    Aa,
    EddTail,
    DeltaProbe,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    what: VerifyWhat,
    #[arg(long, default_value = "linear")]
    alpha: String,
    /// Comma-separated `p:q` list.
    #[arg(long, default_value = "1:2")]
    pairs: String,
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Exponent of the probe sequence exp(theta alpha_{n+1}), rational.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    theta: String,
    /// Index window `a..b` for the aa statistic; default the whole table.
    #[arg(long)]
    window: Option<String>,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(long, default_value = "linear")]
    alpha: String,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
}

fn run(cli: &Cli) -> Result<Option<Verdict>, CliError> {
    let doc = match &cli.command {
        Command::Grid(a) => commands::grid(a)?,
        Command::GenMatrix(a) => commands::gen_matrix(a)?,
        Command::Diameters(a) => commands::diameters(a)?,
        Command::Check(a) => commands::check(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::PlotData(a) => commands::plot_data(a)?,
    };
    if let Some(path) = output::emit(&doc, cli.format, cli.out.as_deref(), cli.out_dir.as_deref())? {
        eprintln!("wrote {}", path.display());
    }
    Ok(doc.verdict)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Some(Verdict::Fail)) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
