use thiserror::Error;

/// Errors raised by the exact kernel and the algorithms built on it.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("incompatible cyclotomic fields Q(zeta_{left}) and Q(zeta_{right}); no compositum is formed")]
    IncompatibleFields { left: u32, right: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("series has a nonzero constant term where an element of the maximal ideal is required")]
    NonzeroConstantTerm,

    #[error("series is not a unit (zero constant term)")]
    NotAUnit,

    #[error("series vanishes up to its truncation order {0}")]
    ZeroSeries(u32),

    #[error("germ is not dominant up to order {0}")]
    NotDominant(u32),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("germ is not in prepared form: {0}")]
    NotPrepared(String),

    #[error("lift is indeterminate at the chosen point: {0}")]
    IndeterminateLift(String),

    #[error("lift does not fix the chosen point; image is {image}")]
    PointNotFixed { image: String },

    #[error("lowest-order parts share a zero on the exceptional line: {0}")]
    CommonZero(String),

    #[error("truncation exhausted: {0}")]
    TruncationExhausted(String),

    #[error("no rigid lift found within {steps} blow-ups")]
    MaxStepsExceeded { steps: usize },

    #[error("undecidable in the given coordinates: {0}")]
    Undecidable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
