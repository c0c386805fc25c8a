//! Command-line front end.
//!
//! | exit code | meaning                                              |
//! |-----------|------------------------------------------------------|
//! | 0         | success                                              |
//! | 2         | `reconstruct` found no physical fixed point          |
//! | 64        | malformed spec, bad arguments or invalid parameters  |
//! | 65        | dimension mismatch between spec components           |
//! | 66        | spec or config file cannot be read                   |
//! | 74        | output cannot be written                             |

mod commands;
pub mod schema;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::{bloch_vector, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ANOMALY: i32 = 2;
pub const EXIT_MALFORMED: i32 = 64;
pub const EXIT_DIMENSION: i32 = 65;
pub const EXIT_NO_INPUT: i32 = 66;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(
    name = "pauli-partners",
    version,
    about = "Pure-state reconstruction by iterated amplitude imposition"
)]
pub struct Cli {
    /// Master seed; overrides `solver.master_seed` from the spec or config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for seed runs (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with solver settings, applied before the spec's own.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate all states reproducing the spec's distributions.
    Reconstruct { spec: PathBuf },
    /// Count solutions along a path of generator states; CSV plus a
    /// `<stem>.brackets.json` sidecar next to `--out`.
    Bifurcate { spec: PathBuf },
    /// Search for a generator with partners (informational completeness probe).
    Probe { spec: PathBuf },
    /// Record every iterate of one seed run as CSV.
    Trajectory { spec: PathBuf },
    /// Lower bound on rank-one POVM elements for pure-state tomography.
    Bound { dim: u64 },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed spec: {0}")]
    Spec(String),
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Domain(#[from] crate::Error),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error("cannot format CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Spec(_) | Self::Json { .. } => EXIT_MALFORMED,
            Self::Domain(crate::Error::DimensionMismatch { .. }) => EXIT_DIMENSION,
            Self::Domain(_) => EXIT_MALFORMED,
            Self::Input { .. } => EXIT_NO_INPUT,
            Self::Output { .. } | Self::Csv(_) => EXIT_IO,
        }
    }
}

/// Parse arguments, run the command, print diagnostics to standard error and
/// return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let work = || commands::dispatch(cli);
    match cli.threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Spec(format!("cannot start {n} threads: {e}")))?
            .install(work),
        _ => work(),
    }
}

/// Write `bytes` to `path` through a temporary file in the same directory
/// and a rename, or to standard output when `path` is `None`.
pub(crate) fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|source| CliError::Output {
                path: PathBuf::from("<stdout>"),
                source,
            });
    };
    let err = |source| CliError::Output {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(err)?;
    tmp.write_all(bytes).map_err(err)?;
    tmp.as_file().sync_all().map_err(err)?;
    tmp.persist(path).map_err(|e| err(e.error))?;
    Ok(())
}
