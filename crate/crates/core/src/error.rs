use thiserror::Error;

/// Errors surfaced by the library. Variant names are part of the CLI
/// contract and are printed verbatim on the error stream.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("SchemaError: {0}")]
    Schema(String),
    #[error("ValidationError: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("UnknownFixture: {0}")]
    UnknownFixture(String),
    #[error("NonTateClass: {0}")]
    NonTateClass(String),
    #[error("NotRegularAtInfinity: {0}")]
    NotRegularAtInfinity(String),
    #[error("ReconstructionFailed: {0}")]
    ReconstructionFailed(String),
    #[error("NonDivisible: {0}")]
    NonDivisible(String),
    #[error("MissingStratum: {0}")]
    MissingStratum(String),
    #[error("MissingCover: {0}")]
    MissingCover(String),
    #[error("MissingCounts: {0}")]
    MissingCounts(String),
    #[error("NotMassless: {0}")]
    NotMassless(String),
    #[error("PoleAtOne: {0}")]
    PoleAtOne(String),
    #[error("NonIntegralExpansion: {0}")]
    NonIntegralExpansion(String),
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error("IoError: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by the input document rather than by the
    /// computation (exit code 1 instead of 2).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Schema(_)
                | Error::Validation(_)
                | Error::UnknownFixture(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
