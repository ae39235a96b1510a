use thiserror::Error;

/// Errors surfaced by the family machinery.
///
/// Variants named `...Violated` indicate that a checked mathematical
/// postcondition failed; they carry the violated clause so that a report can
/// be filed against the implementation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ground parameters n={n}, k={k} (need 1 <= k <= n <= 30)")]
    InvalidParams { n: usize, k: usize },

    #[error("element {elem} outside ground set [1, {n}]")]
    ElementOutOfRange { elem: usize, n: usize },

    #[error("set {set} has {got} elements, expected {expected}")]
    WrongSetSize {
        set: String,
        got: usize,
        expected: usize,
    },

    #[error("elements must be strictly increasing: {0:?}")]
    NotStrictlyIncreasing(Vec<usize>),

    #[error("ground sets differ: n={left} vs n={right}")]
    GroundMismatch { left: usize, right: usize },

    #[error("restriction sets I and J overlap")]
    OverlappingRestriction,

    #[error("rank {rank} outside 1..={max}")]
    RankOutOfRange { rank: u64, max: u64 },

    #[error("count {m} outside 0..={max}")]
    CountOutOfRange { m: String, max: u64 },

    #[error("operation needs a non-empty family")]
    EmptyFamily,

    #[error("invalid shift pair ({i}, {j}) for n={n}")]
    InvalidShiftPair { i: usize, j: usize, n: usize },

    #[error("no l >= 1 with |F ∩ [2l-1]| = l for F = {0}")]
    NoFranklIndex(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("families are not cross-intersecting")]
    NotCrossIntersecting,

    #[error("malformed family JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
