//! Command line front end for `farsight-core`: instance and certificate
//! files, reports, and the `farsight` commands.

pub mod args;
pub mod certificate;
pub mod commands;
pub mod error;
pub mod instance;
pub mod report;

pub use args::Cli;
pub use commands::{run, Output};
pub use error::CliError;
