//! Experiment driver for sparse-grid recovery and cubature: a corpus of
//! test functions with certified smoothness, CSV / JSON-lines output,
//! convergence studies and a command-line front end.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod experiments;
pub mod io;

pub use error::{CliError, CliResult};
