//! Reproducible experiments confronting the limit theorems of the
//! moment-space library with numbers: each takes a JSON config and yields an
//! [`ExperimentReport`] with a data table, a summary and pass/fail checks.

pub mod config;
pub mod experiments;
pub mod report;

use momentspace::Result;

pub use config::{Experiment, ExperimentConfig, SCHEMA_VERSION};
pub use report::{Cell, Check, ExperimentReport};

/// Runs one experiment; a pure function of the config.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    match &config.experiment {
        Experiment::Clt(p) => experiments::clt::run(config, p),
        Experiment::Ldp(p) => experiments::ldp::run(config, p),
        Experiment::Mdp(p) => experiments::mdp::run(config, p),
        Experiment::Taylor(p) => experiments::taylor::run(config, p),
        Experiment::Szego(p) => experiments::szego::run(config, p),
        Experiment::RangeConv(p) => experiments::range_conv::run(config, p),
        Experiment::SigmaPlus(p) => experiments::sigma_plus::run(config, p),
    }
}
