//! Problem files, command dispatch, reports and the on-disk cache behind the `fb` binary.

pub mod cache;
pub mod commands;
pub mod problem;
pub mod schema;

pub use commands::{run, CliError, Command, ReportEnvelope, RunOptions, RunOutput};
pub use problem::{parse_problem, ProblemError, ProblemFile};
