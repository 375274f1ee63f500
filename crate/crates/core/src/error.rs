use thiserror::Error;

use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A transform or matrix function was evaluated at (or numerically on)
    /// one of its poles.
    #[error("singular evaluation at s = {s}{}", eigenvalue.map(|x| format!(" (shifted by L0 eigenvalue {x})")).unwrap_or_default())]
    Singular { s: C64, eigenvalue: Option<C64> },

    /// The 4x4 response system is numerically singular.
    #[error("response pole at s = {s}: condition number {condition:.3e}")]
    Pole { s: C64, condition: f64 },

    #[error("extrapolation did not converge: iterates {iterates:?}")]
    NonConvergent { iterates: Vec<f64> },

    #[error("tabulated correlation queried at tau = {tau} beyond grid end {end}")]
    Extrapolation { tau: f64, end: f64 },

    #[error("step size violation: {0}")]
    StepSize(String),

    #[error("peak detection failed: {0}")]
    Detection(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse error classes, mapped onto process exit codes by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Numerical,
    Io,
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) | Error::Parse(_) => ErrorClass::Usage,
            Error::Io { .. } => ErrorClass::Io,
            _ => ErrorClass::Numerical,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
