//! Error types with machine-readable categories for exit reporting.

use std::path::PathBuf;

/// Configuration-file failures, each naming the offending key.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config: {message}")]
    Syntax { message: String },
    #[error("unknown key `{key}` in {location}{}", suggestion.as_ref().map(|s| format!("; did you mean `{s}`?")).unwrap_or_default())]
    UnknownKey {
        key: String,
        location: String,
        suggestion: Option<String>,
    },
    #[error("missing key `{key}` in {location}")]
    MissingKey { key: String, location: String },
    #[error("invalid value for `{key}` in {location}: {reason}")]
    InvalidValue {
        key: String,
        location: String,
        reason: String,
    },
}

impl ConfigError {
    pub fn category(&self) -> &'static str {
        match self {
            ConfigError::Io { .. } => "config/io",
            ConfigError::Syntax { .. } => "config/syntax",
            ConfigError::UnknownKey { .. } => "config/unknown-key",
            ConfigError::MissingKey { .. } => "config/missing-key",
            ConfigError::InvalidValue { .. } => "config/invalid-value",
        }
    }
}

/// Top-level command failures.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Domain(#[from] rima_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(c) => c.category(),
            CliError::Output { .. } => "io/output",
            CliError::Domain(_) => "domain",
            CliError::Usage(_) => "usage",
        }
    }
}
