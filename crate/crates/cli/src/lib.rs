//! Experiment harness: seeded sweeps over sample count or column count,
//! per-trial CSV rows and per-point summary statistics.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;
pub mod seeds;
pub mod summary;

pub use config::{Experiment, ExperimentConfig, Params, SCHEMA_VERSION};
pub use error::HarnessError;
pub use output::{emit_csv, emit_summary_csv, write_csv, write_summary_csv, CSV_HEADER};
pub use runner::{run_experiment, run_single, run_trial, Row};
pub use summary::{summarize, Stats, SweepSummary};
