//! Library side of the `fibra` command: job configuration, commands and JSON reports.

pub mod config;
pub mod report;
pub mod run;
