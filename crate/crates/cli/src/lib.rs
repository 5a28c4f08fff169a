//! Command line front end for `chiral-core`: datum files in, reports out.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod family;
pub mod text;

pub use text::{parse_datum, print_datum, ParseError, ParsedDatum};

/// Exit status for a well-formed negative result.
pub const EXIT_NEGATIVE: i32 = 2;
/// Exit status for usage, input and parse errors.
pub const EXIT_ERROR: i32 = 1;

/// Environment variable overriding the default weight cutoff.
pub const CUTOFF_ENV: &str = "CHIRAL_CUTOFF";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Datum(#[from] chiral_core::datum::DatumError),
    #[error(transparent)]
    Qls(#[from] chiral_core::qls::QlsError),
    #[error(transparent)]
    Catalog(#[from] chiral_core::catalog::CatalogError),
    #[error(transparent)]
    Engine(#[from] chiral_core::vertex::EngineError),
}

#[derive(Debug, Parser)]
#[command(name = "chiral", version, about = "Quadratic duality and Maurer-Cartan checks for chiral algebras")]
pub struct Cli {
    /// Emit a machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a datum and test dualizability.
    Check { file: PathBuf },
    /// Print the quadratic dual in datum syntax.
    Dual { file: PathBuf },
    /// Dualize a QLS datum into a twisted pair.
    QlsDual { file: PathBuf },
    /// Verify the Maurer-Cartan equations of the canonical element.
    McVerify {
        /// QLS datum of an affine or Weyl-Clifford family.
        file: Option<PathBuf>,
        /// Built-in example: kac-moody-sl2, heisenberg, abelian, beta-gamma, bc.
        #[arg(long, conflicts_with = "file")]
        example: Option<String>,
        /// Level for kac-moody-sl2 and heisenberg.
        #[arg(long)]
        level: Option<String>,
        /// Weight cutoff of the engines.
        #[arg(long)]
        cutoff: Option<i64>,
        /// Largest m in the equations E_m; defaults to the locality bound.
        #[arg(long)]
        mmax: Option<i64>,
    },
    /// Check that a generator assignment defines a vertex algebra map.
    HomCheck {
        /// QLS datum of the source affine algebra.
        file: PathBuf,
        /// Assignment file with a [map] section and optional target datum.
        map: PathBuf,
        #[arg(long)]
        cutoff: Option<i64>,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_ERROR,
            };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (rendered, String::new()) } else { (String::new(), rendered) };
            return Outcome { code, stdout, stderr };
        }
    };
    match commands::execute(&cli) {
        Ok(out) => out,
        Err(e) => Outcome {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
