//! Command-line laboratory on top of `slag-core`: report generation, the
//! verification battery and Floer complex IO.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod floer_io;
pub mod report;
pub mod verify;

pub use commands::{run, Cli};
pub use error::CliError;
pub use report::{write_output, Format, Output};
