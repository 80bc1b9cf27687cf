use std::path::PathBuf;

use farsight_core::farsight::SearchError;
use farsight_core::matching::LiteralError;
use farsight_core::{BuildError, CapacityError};

use crate::instance::Diagnostic;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}", located(path, diagnostics))]
    Invalid { path: PathBuf, diagnostics: Vec<Diagnostic> },
    #[error("matching `{text}`: {source}")]
    Literal { text: String, source: LiteralError },
    #[error("the set is empty")]
    EmptySet,
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error(transparent)]
    Search(SearchError),
    #[error("no path: {0}")]
    Build(#[from] BuildError),
}

fn located(path: &std::path::Path, diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .map(|d| match d.line {
            Some(line) => format!("{}:{line}: {}", path.display(), d.message),
            None => format!("{}: {}", path.display(), d.message),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Capacity(c) => CliError::Capacity(c),
            SearchError::EmptySet => CliError::EmptySet,
            other => CliError::Search(other),
        }
    }
}

impl CliError {
    /// 1 when no path could be built, 2 for bad input, 3 when limits are exceeded.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Build(BuildError::Stuck { .. } | BuildError::Incomplete) => 1,
            CliError::Capacity(_) | CliError::Search(SearchError::TooManySubsets { .. }) => 3,
            _ => 2,
        }
    }
}
