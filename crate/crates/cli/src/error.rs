use std::fmt;

use thiserror::Error;

/// A problem at a key path inside a workspace document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub path: String,
    pub detail: String,
}

impl fmt::Display for Located {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.detail)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {detail}")]
    Io { path: String, detail: String },
    #[error("{file}:{line}:{column}: {detail}")]
    Parse {
        file: String,
        line: usize,
        column: usize,
        detail: String,
    },
    #[error("{file}: {} invalid entr{}:\n  {}", errors.len(), if errors.len() == 1 { "y" } else { "ies" }, join(errors))]
    Validation { file: String, errors: Vec<Located> },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("missing argument --{0}")]
    MissingArgument(&'static str),
    #[error("invalid argument --{flag}: {detail}")]
    BadArgument { flag: &'static str, detail: String },
    #[error(transparent)]
    Core(#[from] wkan_core::Error),
}

fn join(errors: &[Located]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n  ")
}

impl CliError {
    pub fn unknown(kind: &'static str, name: &str) -> Self {
        CliError::Unknown {
            kind,
            name: name.to_string(),
        }
    }

    /// Every error is a budget or validation failure as far as the exit
    /// status is concerned.
    pub fn exit_code(&self) -> i32 {
        2
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            CliError::Core(
                wkan_core::Error::BudgetExceeded { .. }
                    | wkan_core::Error::SizeLimitExceeded { .. }
            )
        )
    }
}
