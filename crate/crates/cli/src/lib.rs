//! Seeded experiment harness: runs the single- and multi-objective strategies
//! over repetitions and dimensions, logs trajectories as CSV or JSON lines and
//! reduces them to median curves.

pub mod config;
pub mod error;
pub mod records;
pub mod runner;
pub mod summary;

pub use config::{Algorithm, Budget, ExperimentConfig, Format, Mode, ProblemRef};
pub use error::{CliError, Result};
pub use records::{read_stream, FileSink, LogHeader, MemorySink, RecordSink, RunRecord};
pub use runner::{run_experiment, run_one, RunOptions, RunOutcome, StopReason};
pub use summary::{summarize, SummaryOptions, SummaryRow};

/// Overrides the default `./results` output directory.
pub const OUTPUT_DIR_ENV: &str = "LMMAES_OUTPUT_DIR";

pub fn default_output_dir() -> std::path::PathBuf {
    std::env::var_os(OUTPUT_DIR_ENV).map(Into::into).unwrap_or_else(|| "results".into())
}
