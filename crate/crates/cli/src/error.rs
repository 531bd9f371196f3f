use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error("simplicial set {name} has truncation {found}, the workspace uses {expected}")]
    Truncation { name: String, found: usize, expected: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] reedy_core::Error),
}

pub type CliResult<T> = Result<T, CliError>;
