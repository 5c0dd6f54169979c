//! Command-line front end: argument parsing into an [`ExperimentConfig`],
//! dispatch into the library, and JSON, CSV or text reports.

pub mod config;
pub mod output;
pub mod report;
pub mod run;

pub use config::ExperimentConfig;
pub use report::{RunReport, Status};
pub use run::run;
