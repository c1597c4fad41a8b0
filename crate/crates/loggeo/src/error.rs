use thiserror::Error;

/// Errors from the polynomial / Groebner kernel.
#[derive(Debug, Clone, Error)]
pub enum KernelError {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("rank mismatch: expected vector of length {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// Errors from lattice and monoid computations.
#[derive(Debug, Clone, Error)]
pub enum MonoidError {
    #[error("search bound exceeded: {0}")]
    SearchBound(String),
    #[error("inconclusive within configured bound: {0}")]
    Inconclusive(String),
    #[error("lattice quotient has torsion (invariant factor {0} > 1)")]
    Torsion(i64),
    #[error("vector {0:?} is not in the group generated by the monoid")]
    NotInGroup(Vec<i64>),
    #[error("vector {0:?} is not a member of the monoid")]
    NotMember(Vec<i64>),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Parse errors carry a position into the offending string.
#[derive(Debug, Clone, Error)]
#[error("parse error at {line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// Top-level error type for chart loading, validation and suite execution.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("chart validation failed:\n{}", .0.join("\n"))]
    Validation(Vec<String>),
    #[error("invalid chart data: {0}")]
    Chart(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("precondition not met: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Resource-limit errors are reported as "skipped" rather than "failed"
    /// by the suite runner.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::Kernel(KernelError::ResourceLimit(_))
                | Error::Monoid(MonoidError::SearchBound(_))
                | Error::Monoid(MonoidError::Inconclusive(_))
        )
    }
}
