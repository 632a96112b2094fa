use std::fmt;

use thiserror::Error;

use crate::nilpotent::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("capacity error: {requested} samples exceeds the budget of {budget}")]
    Capacity { requested: usize, budget: usize },

    #[error("contract error: {0}")]
    Contract(String),

    #[error("numeric error: {message}")]
    Numeric {
        message: String,
        diagnostics: Vec<String>,
    },

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("algebra validation failed: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("BCH product is implemented through step 4, algebra has step {0}")]
    UnsupportedStep(usize),

    #[error("near-singular central frequency λ = {0:e}: Plancherel density vanishes")]
    NearSingular(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(#[from] serde_json::Error),
}

/// Coarse error classes, used for CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Contract,
    Numeric,
    Io,
}

impl Error {
    pub fn numeric(message: impl Into<String>) -> Self {
        Error::Numeric {
            message: message.into(),
            diagnostics: Vec::new(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Input(_)
            | Error::Capacity { .. }
            | Error::Resolution(_)
            | Error::Validation(_)
            | Error::UnsupportedStep(_)
            | Error::Format(_) => ErrorKind::Input,
            Error::Contract(_) | Error::Domain(_) => ErrorKind::Contract,
            Error::Numeric { .. } | Error::NearSingular(_) => ErrorKind::Numeric,
            Error::Io(_) => ErrorKind::Io,
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    let mut out = String::new();
    for (n, item) in v.iter().enumerate() {
        if n > 0 {
            out.push_str("; ");
        }
        if n == 8 {
            out.push_str(&format!("... {} more", v.len() - 8));
            break;
        }
        out.push_str(&item.to_string());
    }
    out
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ErrorKind::Input => "input-error",
            ErrorKind::Contract => "contract-error",
            ErrorKind::Numeric => "numeric-error",
            ErrorKind::Io => "io-error",
        };
        f.write_str(s)
    }
}
