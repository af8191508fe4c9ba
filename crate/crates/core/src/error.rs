use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("(q)_k is only supported for k >= 0, got k = {0}")]
    NegativePochhammer(i64),

    #[error("series inverse needs a constant term of +1 or -1")]
    NonUnitConstant,

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("series did not stabilize through the cutoff by L = {l_cap}")]
    NotStabilized { l_cap: i64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
