use thiserror::Error;

/// Errors raised by the exact and numeric layers.
///
/// The CLI maps these onto stable exit codes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("invalid field generators: {0}")]
    InvalidField(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    #[error("pole: {0}")]
    Pole(String),

    #[error("degenerate homomorphism: {0}")]
    DegenerateHomomorphism(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// 1 usage/parse, 2 domain, 3 precision.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) => 1,
            Error::InsufficientPrecision(_) | Error::NonFinite(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
