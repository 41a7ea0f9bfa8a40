use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BallotError {
    #[error("invalid bit sequence: {0}")]
    InvalidBits(String),

    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("n = {n} exceeds the cap of {cap} for {operation}; raise the cap explicitly to proceed")]
    CapExceeded {
        operation: &'static str,
        n: usize,
        cap: usize,
    },
}

pub type Result<T> = std::result::Result<T, BallotError>;
