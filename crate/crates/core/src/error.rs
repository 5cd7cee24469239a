use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("part {part}: {what} must be at least 1, got {value}")]
    ZeroOrNegative { part: usize, what: &'static str, value: i64 },

    #[error("part {part}: uniformity k={k} exceeds part size n={n}")]
    UniformityTooLarge { part: usize, n: u32, k: u32 },

    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("part structure mismatch: {0}")]
    StructureMismatch(String),

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("layer has {size} members, above the cap of {cap}")]
    LayerTooLarge { size: String, cap: u64 },

    #[error("invalid shift index (t={t}, i={i}, j={j}): {reason}")]
    InvalidShiftIndex { t: usize, i: u32, j: u32, reason: &'static str },

    #[error("family is not non-trivially intersecting")]
    NotNontrivial,

    #[error("pair (t={t}, S={s:?}) is excluded: the family would be trivially intersecting")]
    ExcludedPair { t: usize, s: Vec<usize> },

    #[error("vector {0:?} is not in L_t")]
    NotInLt(Vec<u32>),

    #[error("infeasible witnesses: {0}")]
    InfeasibleWitnesses(String),

    #[error("binomial with negative n={0}")]
    NegativeN(i64),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("no admissible (t, S) pair: every non-trivially intersecting family is empty")]
    NoAdmissiblePair,

    #[error("graph would have {vertices} vertices, above the cap of {cap}")]
    TooLarge { vertices: String, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
