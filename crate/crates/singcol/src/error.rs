use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arity error: expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("not a germ at the origin: constant term is nonzero")]
    NotAGerm,
    #[error("non-reduced germ: {0}")]
    NonReduced(String),
    #[error("non-isolated singularity: {0}")]
    NonIsolated(String),
    #[error("degenerate input ({0}); resample the coefficients")]
    Degenerate(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("order convention violated: {0}")]
    OrderConvention(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("not tabulated: {0}")]
    NotTabulated(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("flat limit did not terminate after {0} passes")]
    NonTermination(usize),
    #[error("genericity failure after {0} attempts")]
    Genericity(usize),
    #[error("structural bug: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, Error>;
