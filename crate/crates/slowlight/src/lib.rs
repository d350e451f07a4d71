//! Scenario files, CSV tables and the `slowlight` command line on top of
//! [`slowlight_core`].

pub mod commands;
pub mod error;
pub mod fft;
pub mod scenario;
pub mod table;
pub mod units;

pub use commands::{Command, RunOptions};
pub use error::CliError;
pub use fft::RustFft;
pub use scenario::Scenario;
pub use slowlight_core as core;
pub use table::Table;
