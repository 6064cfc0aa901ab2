use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("matrix exponential did not converge: {0}")]
    ExpmNonConvergence(&'static str),
    #[error("invalid truncation: {0}")]
    InvalidTruncation(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("time must be nonnegative for dissipative factors, got {0}")]
    NegativeTime(f64),
    #[error("series for the commutator factor would not converge: beta^2*||PQ|| = {bound:.3} exceeds {limit}; reduce t or the truncation")]
    SeriesDivergence { bound: f64, limit: f64 },
    #[error("invalid integration plan: {0}")]
    InvalidPlan(String),
    #[error("invalid error-fit input: {0}")]
    InvalidFit(String),
}
