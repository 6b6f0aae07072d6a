//! Instance-file parsing and command dispatch for the `mixmult` binary.

pub mod instance;
pub mod run;

pub use instance::{parse_instance, InstanceFile, ParseError};
pub use run::{run, run_args, Check, Cli, Command, Output};
