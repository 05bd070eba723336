//! Batch front-end for the `xilap` crate: grid evaluation, identity suites,
//! scans and metric sampling, with JSON reports and CSV grids.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod registry;
pub mod report;
pub mod run;

pub use config::RunConfig;
pub use error::CliError;
pub use run::{execute, Outcome};
