//! Experiment runners behind the command-line interface.

mod config;
mod experiments;
pub mod output;

pub use config::{parse_modes, AssociationMode, SimConfig};
pub use experiments::{
    run_dof_experiment, run_rate_sweep, run_single, setup_trial, DofRow, SingleRecord, SweepResult, SweepRow,
    TrialSetup,
};
