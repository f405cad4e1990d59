use thiserror::Error;

/// Errors raised by ring construction, arithmetic, series and family operations.
///
/// Mathematical verdicts (a family that does not commute, a group law that is
/// not integral) are usually reported as data in the result types; the
/// variants here are reserved for situations where an operation cannot
/// produce a meaningful answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {check} ({detail})")]
    InvalidRing { check: &'static str, detail: String },

    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),

    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("precision exhausted at index {index}: {detail}")]
    PrecisionExhausted { index: usize, detail: String },

    #[error("undecidable at precision (index {index}): {detail}")]
    Undecidable { index: usize, detail: String },

    #[error("non-integral coefficient at {index}: {detail}")]
    NonIntegral { index: String, detail: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("lookup outside table: {0}")]
    NotInTable(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

impl Error {
    /// True for errors that say "could not decide at this precision/truncation"
    /// rather than "the mathematics failed".
    pub fn is_precision(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted { .. } | Error::Undecidable { .. }
        )
    }

    /// True for errors that carry a mathematical failure witness.
    pub fn is_math_failure(&self) -> bool {
        matches!(
            self,
            Error::NonIntegral { .. } | Error::Verification(_) | Error::SearchExhausted(_)
        )
    }

    /// Short stable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidRing { .. } => "invalid-ring",
            Error::RingMismatch(..) => "ring-mismatch",
            Error::NotAUnit(_) => "not-a-unit",
            Error::PrecisionExhausted { .. } => "precision-exhausted",
            Error::Undecidable { .. } => "undecidable",
            Error::NonIntegral { .. } => "non-integral",
            Error::Precondition(_) => "precondition",
            Error::Verification(_) => "verification",
            Error::Parse(_) => "parse",
            Error::NotInTable(_) => "not-in-table",
            Error::SearchExhausted(_) => "search-exhausted",
        }
    }

    pub(crate) fn ring(check: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidRing {
            check,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
