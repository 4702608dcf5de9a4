//! Standard-library companion to `stabtherm-core`: brute-force oracles,
//! threaded enumeration, CSV and report output, configuration and the
//! command-line pipelines.

pub mod config;
pub mod error;
pub mod io;
pub mod oracle;
pub mod parallel;
pub mod run;

pub use config::{Cli, RunConfig};
pub use error::{Category, CliError};
pub use run::{execute, run, Outcome};
