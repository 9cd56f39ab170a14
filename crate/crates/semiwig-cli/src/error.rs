use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Scenario {
        context: String,
        source: semiwig::Error,
    },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// 2 for configuration and comparability, 3 for numerical failures,
    /// 4 for coverage and resolution, 1 for anything else.
    pub fn exit_code(&self) -> u8 {
        use semiwig::Error as E;
        match self {
            Self::Schema { .. } | Self::Read { .. } => 2,
            Self::Write { .. } => 1,
            Self::Scenario { source, .. } => match source {
                E::Config(_) | E::Capability(_) | E::Comparability(_) => 2,
                E::Coverage(_) | E::Resolution(_) => 4,
                E::Io(_) => 1,
                E::Domain(_)
                | E::Numeric(_)
                | E::Accuracy { .. }
                | E::Truncation { .. }
                | E::Dependency(_)
                | E::Statistics(_) => 3,
            },
        }
    }
}

/// Attaches scenario context to library errors.
pub trait Context<T> {
    fn context<S: Into<String>>(self, context: impl FnOnce() -> S) -> CliResult<T>;
}

impl<T> Context<T> for semiwig::Result<T> {
    fn context<S: Into<String>>(self, context: impl FnOnce() -> S) -> CliResult<T> {
        self.map_err(|source| CliError::Scenario {
            context: context().into(),
            source,
        })
    }
}
