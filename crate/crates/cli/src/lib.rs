//! Library side of the `chanent` binary: run configuration, CSV tables,
//! verification suites and figure data.

pub mod config;
pub mod entropy;
pub mod figure;
pub mod output;
pub mod verify;

pub use config::{CliError, RunConfig};
pub use output::Table;
