//! Batch runner for the holomorphic torsion verification toolkit: config
//! parsing, suites, reports and the command-line front end.

pub mod cli;
pub mod config;
pub mod report;
pub mod suites;

pub use config::{Command, Format, RunConfig};
pub use report::{Case, Report, Status};
pub use suites::run;
