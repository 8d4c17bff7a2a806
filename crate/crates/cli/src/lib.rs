//! Batch front end for the ansatz search engine.
//!
//! One run configuration (TOML) describes one experiment. `search` writes a
//! reward trace, a report and a self-contained circuit file; `finetune`,
//! `sample`, `evaluate` and `export` work from that circuit file alone;
//! `oracle` computes brute-force reference values for a configured task.

pub mod circuit;
pub mod commands;
pub mod config;
pub mod error;

pub use circuit::{CircuitFile, LoadedCircuit, Problem, TaskSpec};
pub use commands::{
    cmd_evaluate, cmd_export, cmd_finetune, cmd_oracle, cmd_sample, cmd_search, EvaluationReport, ExportFormat,
    FinetuneSummary, HistogramReport, OracleReport, SearchSummary,
};
pub use config::RunConfig;
pub use error::{CliError, CliResult};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "QAS_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::input(THREADS_ENV, format!("expected a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::input(THREADS_ENV, e))
}
