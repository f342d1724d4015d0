//! Command-line front end for `threeweb`.
//!
//! Every command computes in memory and returns an [`Outcome`]; files are
//! written by [`Outcome::write`] in one pass at the end of the run.

pub mod args;
mod commands;
pub mod config;

use std::path::{Path, PathBuf};

use thiserror::Error;
use threeweb::expr::ParseError;
use threeweb::ErrorClass;

pub use args::Cli;
pub use commands::run;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("cannot parse {what} `{text}`: {error}\n  {text}\n  {caret:>width$}", caret = "^", width = error.offset + 1)]
    Parse {
        what: String,
        text: String,
        error: ParseError,
    },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] threeweb::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.class() == ErrorClass::Numerical => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

macro_rules! core_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_from!(
    threeweb::web::WebError,
    threeweb::web::TraceError,
    threeweb::expr::EvalError,
    threeweb::analysis::AnalysisError,
    threeweb::verify::VerifyError
);

/// Result of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: u8,
    pub out: PathBuf,
    /// `(file name, contents)` in write order.
    pub files: Vec<(String, String)>,
    pub summary: String,
}

impl Outcome {
    pub fn write(&self) -> Result<(), CliError> {
        if self.files.is_empty() {
            return Ok(());
        }
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Io { path, source }
        };
        std::fs::create_dir_all(&self.out).map_err(io(&self.out))?;
        for (name, contents) in &self.files {
            let path = self.out.join(name);
            std::fs::write(&path, contents).map_err(io(&path))?;
        }
        Ok(())
    }
}
