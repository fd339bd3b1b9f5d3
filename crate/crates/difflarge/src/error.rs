//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero input not allowed: {0}")]
    ZeroInput(&'static str),

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial is not univariate: {0}")]
    NotUnivariate(String),

    #[error("order undefined: polynomial is zero or free of the differential variable")]
    OrderUndefined,

    #[error("jet too short: need at least {needed} coordinates, got {got}")]
    JetTooShort { needed: usize, got: usize },

    #[error("base field mismatch")]
    BaseMismatch,

    #[error("operation requires an irreducible polynomial")]
    RequiresIrreducible,

    #[error("reducibility detected: {0}")]
    ReducibleDetected(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("derivative index cap exceeded (cap {0})")]
    DerivativeCapExceeded(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("series coefficient below precision requested")]
    PrecisionExceeded,

    #[error("nonvanishing of g within the truncation is inconclusive; raise the precision")]
    InconclusiveNonvanishing,

    #[error("only {found} of {requested} distinct solutions located within the search bound")]
    FewerFound { requested: usize, found: usize },

    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),

    #[error("internal error: {0}")]
    Internal(String),
}
