//! Library half of the `lrb-detect` command line: config parsing, CSV
//! assembly, and the experiment runners. The binary in `main.rs` is a thin
//! argument-parsing shell over [`runner`].

pub mod config;
pub mod csv;
pub mod runner;

use thiserror::Error;

pub use config::{load_config, snr_to_theta1, ExperimentConfig, SchedulerChoice, SEED_ENV_VAR};
pub use csv::CsvTable;
pub use runner::{run_attack_optimum, run_exponent_sweep, run_mc_experiment, run_thresholds};

/// CLI failures, carrying their process exit code: 2 for configuration
/// problems, 3 for numeric non-convergence, 1 for output I/O.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("numeric failure: {0}")]
    Numeric(lrb_detect::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}
