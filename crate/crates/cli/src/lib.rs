//! Experiment runner: named presets, configuration files and CSV/JSON reports.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod presets;
pub mod report;
pub mod run;
pub mod triple;

pub use config::{ExperimentConfig, PresetConfig, PRESETS};
pub use error::{LabError, Result};
pub use report::{Report, Row, Verdict};
pub use run::{run_experiment, RunOutput};
