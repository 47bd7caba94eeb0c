//! File formats, reporting and the command line front end for `sqp-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod executor;
pub mod experiment;
pub mod ingest;
pub mod output;
pub mod report;
pub mod table;

pub use error::{CliError, CliResult};
pub use executor::Rayon;
