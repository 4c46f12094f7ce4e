use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("differentials do not square to zero at degree {degree}")]
    NotSquareZero { degree: i64 },

    #[error("cochain is not a cocycle in degree {degree}")]
    NotCocycle { degree: i64 },

    #[error("{what} needs {size} dimensions, above the cap of {cap}")]
    CapExceeded { what: String, size: u128, cap: u128 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("arity bound {given} is too small: structure maps up to arity {needed} are needed")]
    ArityInsufficient { needed: usize, given: usize },

    #[error("cohomology did not stabilize between windows {window} and {next}")]
    Unstable { window: usize, next: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } | Error::Unstable { .. } | Error::ArityInsufficient { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
