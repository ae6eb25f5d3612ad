use std::fmt;

use serde::Serialize;

/// Failure of a run, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration; exit code 2.
    Config { field: Option<String>, message: String },
    /// Numeric or I/O failure during the run; exit code 1.
    Runtime(String),
}

#[derive(Serialize)]
struct ErrorLine<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<&'a str>,
    message: &'a str,
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Config {
            field: Some(field.into()),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Runtime(_) => 1,
        }
    }

    /// One JSON object on one line.
    pub fn to_line(&self) -> String {
        let line = match self {
            CliError::Config { field, message } => ErrorLine {
                error: "config",
                field: field.as_deref(),
                message,
            },
            CliError::Runtime(message) => ErrorLine {
                error: "runtime",
                field: None,
                message,
            },
        };
        serde_json::to_string(&line).expect("error line serializes")
    }
}

impl From<oam_core::Error> for CliError {
    fn from(e: oam_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
