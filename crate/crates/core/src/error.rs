use std::fmt;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain: {0}")]
    Domain(String),
    #[error("special point: {0}")]
    SpecialPoint(String),
    #[error("sector: {0}")]
    Sector(String),
    #[error("near boundary: {0}")]
    NearBoundary(String),
    #[error("convergence: {0}")]
    Convergence(String),
    #[error("precision: {0}")]
    Precision(String),
}

/// Coarse classification used by the command line to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Convergence(_) | Error::Precision(_) | Error::NearBoundary(_) => {
                ErrorClass::Numerical
            }
            _ => ErrorClass::Domain,
        }
    }

    pub(crate) fn pole(what: impl fmt::Display) -> Self {
        Error::Pole(what.to_string())
    }

    pub(crate) fn domain(what: impl fmt::Display) -> Self {
        Error::Domain(what.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
