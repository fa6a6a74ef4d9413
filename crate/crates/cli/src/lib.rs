//! Library side of the `ddikge` command: argument types, run configuration,
//! dataset directories and one function per subcommand.

pub mod cli;
pub mod commands;
pub mod config;
pub mod data;
pub mod error;

pub use cli::{Cli, Command, EvalArgs, ExportArgs, IngestArgs, SynthArgs, Task, TrainArgs};
pub use commands::run;
pub use config::{ResolvedRun, RunConfig};
pub use error::{CliError, CliResult};
