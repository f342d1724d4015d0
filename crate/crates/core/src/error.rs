use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::expr::{EvalError, ParseError};
use crate::geom::GeomError;
use crate::verify::{CollinearityError, VerifyError};
use crate::web::{TraceError, WebError};

/// Whether a failure is the caller's input or the numerics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad expression, shape or configuration.
    Input,
    /// Evaluation outside the analytic domain, tracing or Newton failure.
    Numerical,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Web(#[from] WebError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Collinearity(#[from] CollinearityError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) | Error::Geom(_) => ErrorClass::Input,
            Error::Web(e) => web_class(e),
            Error::Analysis(AnalysisError::Web(e)) | Error::Verify(VerifyError::Web(e)) => web_class(e),
            Error::Analysis(AnalysisError::BadRadius(_)) => ErrorClass::Input,
            Error::Trace(TraceError::NoSuchFoliation(_)) => ErrorClass::Input,
            _ => ErrorClass::Numerical,
        }
    }
}

fn web_class(e: &WebError) -> ErrorClass {
    match e {
        WebError::Eval(_) => ErrorClass::Numerical,
        _ => ErrorClass::Input,
    }
}
