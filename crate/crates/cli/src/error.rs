use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("config error: [{section}] {key}: {message}")]
    Key {
        section: String,
        key: String,
        message: String,
    },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("empty result: {0}")]
    Empty(String),

    #[error("{0}")]
    Core(#[from] proxres_core::Error),

    #[error("consistency check failed: {0}")]
    Check(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn key(section: &str, key: &str, message: impl Into<String>) -> Self {
        CliError::Key {
            section: section.to_string(),
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Empty(_) => 2,
            _ => 1,
        }
    }
}
