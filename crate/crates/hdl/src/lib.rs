//! Batch driver for `hdl-core`: instance configs, experiment sweeps, the
//! brute-force oracle suite and deterministic CSV/JSON reports.

pub mod config;
pub mod experiments;
pub mod instance;
pub mod oracles;
pub mod report;

pub use config::{Experiment, InstanceConfig, ThetaSelector};
pub use experiments::run;
pub use instance::Instance;
pub use report::{ExperimentOutput, RunReport};
