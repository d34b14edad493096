//! Configuration, presets and the run loop behind the `lplab` binary.

pub mod config;
mod error;
pub mod inputs;
pub mod presets;
pub mod run;

pub use error::{CliError, Result};
