//! Command-line front end for `tempex-core`: model specs, experiments and the
//! acceptance suite.

pub mod error;
pub mod experiment;
pub mod spec;
pub mod stats;
pub mod verify;

pub use error::{CliError, Result};
