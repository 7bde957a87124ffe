use thiserror::Error;

/// Errors raised by the engine. Every variant maps to a short machine-readable
/// kind (see [`Error::kind`]) which the CLI prints before the message.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("incompatible pair: {0}")]
    Incompatible(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Dimension(_) => "dimension",
            Error::NotDivisible(_) => "not-divisible",
            Error::Incompatible(_) => "incompatible",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::Unsupported(_) => "unsupported",
            Error::Parse(_) => "parse",
            Error::Verification(_) => "verification",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
