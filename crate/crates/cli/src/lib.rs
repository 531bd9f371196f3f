//! Workspace documents and the `reedy` command line.

pub mod commands;
pub mod error;
pub mod workspace;

pub use commands::{main_with, run, Cli, Command, Outcome};
pub use error::{CliError, CliResult};
pub use workspace::{parse, Workspace, WorkspaceDocument};
