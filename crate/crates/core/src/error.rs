use alloc::string::String;

use crate::code::Family;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported designed distance {0} (need odd 3..=31 leaving k >= 1)")]
    UnsupportedDistance(u32),
    #[error("unsupported field extension degree {0}")]
    UnsupportedField(u32),
    #[error("no registry entry for {family} ({n},{k})")]
    NotFound { family: Family, n: usize, k: usize },
    #[error("k = {k} exceeds the enumeration bound {limit}")]
    TooLarge { k: usize, limit: usize },
    #[error("information set does not satisfy the partial order property")]
    PartialOrderViolated,
    #[error("infeasible design: {0}")]
    Infeasible(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("theta series has no nonzero term")]
    DegenerateTheta,
    #[error("target {target:.3e} is outside the achievable range [{low:.3e}, {high:.3e}] on the bracket")]
    BracketFailure { target: f64, low: f64, high: f64 },
    #[error("no candidate codes")]
    NoCandidates,
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}
