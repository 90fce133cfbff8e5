//! Experiment runner: TOML configs in, CSV traces and summaries out.

pub mod config;
pub mod output;
pub mod reference;
pub mod runner;
pub mod verify;

pub use config::{AlgorithmSpec, ExperimentConfig, ProblemSource, ReferenceMode};
pub use reference::{compute_reference_optimum, ReferenceOptimum};
pub use runner::{build_optimizer, build_problem, run_experiment, ExperimentResults, RunOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

fn code_for(err: &optibatch::Error) -> i32 {
    match err {
        optibatch::Error::Numeric(_) => EXIT_NUMERIC,
        _ => EXIT_CONFIG,
    }
}

/// Numeric failures map to 2, everything else to 1.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    err.chain()
        .find_map(|e| e.downcast_ref::<optibatch::Error>())
        .map(code_for)
        .unwrap_or(EXIT_CONFIG)
}

/// Worst exit code over the individual runs.
pub fn results_exit_code(results: &ExperimentResults) -> i32 {
    results
        .failures()
        .filter_map(|o| o.result.as_ref().err())
        .map(code_for)
        .max()
        .unwrap_or(EXIT_OK)
}
