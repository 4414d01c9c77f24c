use thiserror::Error;

/// Errors raised by the library. Every variant maps to a stable code string
/// used by the JSON interface.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("divisibility violation: {0}")]
    DivisibilityViolation(String),
    #[error("bad exceptional points: {0}")]
    BadExceptionalPoints(String),
    #[error("no projection of rank {0}")]
    NoSuchProjection(String),
    #[error("invalid rank: {0}")]
    InvalidRank(String),
    #[error("inconsistent multiplicities: {0}")]
    InconsistentMultiplicities(String),
    #[error("recipe hypothesis failed: {0}")]
    RecipeHypothesisFailed(String),
    #[error("precondition failed: {0}")]
    Ex1PreconditionFailed(String),
    #[error("tuples do not represent the same multiset: {0}")]
    NotSameMultiset(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("path is not closed: {0}")]
    NotClosed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::InvalidShape(_) => "InvalidShape",
            Error::DivisibilityViolation(_) => "DivisibilityViolation",
            Error::BadExceptionalPoints(_) => "BadExceptionalPoints",
            Error::NoSuchProjection(_) => "NoSuchProjection",
            Error::InvalidRank(_) => "InvalidRank",
            Error::InconsistentMultiplicities(_) => "InconsistentMultiplicities",
            Error::RecipeHypothesisFailed(_) => "RecipeHypothesisFailed",
            Error::Ex1PreconditionFailed(_) => "Ex1PreconditionFailed",
            Error::NotSameMultiset(_) => "NotSameMultiset",
            Error::TooLarge(_) => "TooLarge",
            Error::GridTooCoarse(_) => "GridTooCoarse",
            Error::NotClosed(_) => "NotClosed",
            Error::Parse(_) => "ParseError",
        }
    }

    /// The named condition that failed, for variants that gate on a
    /// hypothesis or inequality.
    pub fn failed_condition(&self) -> Option<&str> {
        match self {
            Error::RecipeHypothesisFailed(c) | Error::Ex1PreconditionFailed(c) => Some(c),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
