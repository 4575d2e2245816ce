use thiserror::Error;

/// Errors raised by the ideal, family and geometry layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ideals live in different rings")]
    RingMismatch,

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("colon or saturation by the zero ideal")]
    ColonByZero,

    #[error("containment required but {0} is not contained in {1}")]
    NotContained(String, String),

    #[error("ideal is not primary to the maximal ideal: {0}")]
    NotPrimary(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("malformed family spec: {0}")]
    MalformedSpec(String),

    #[error("table family has no member at index {index} (length {len})")]
    TableOutOfRange { index: u32, len: usize },

    #[error("exact computation unavailable in dimension {0} (supported up to 3)")]
    DimensionUnsupported(usize),

    #[error("region is not cobounded")]
    NotCobounded,

    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("sequence entries are not consecutive at n = {0}")]
    NonConsecutive(u32),

    #[error("length is infinite: {0}")]
    InfiniteLength(String),

    #[error("family is not a filtration: I_{} is not contained in I_{}", .0 + 1, .0)]
    NotFiltration(u32),

    #[error("hypothesis failed: {0}")]
    Hypothesis(String),

    #[error("predicate is not closed under addition: {0}")]
    NotASemigroup(String),

    #[error("degenerate semigroup: {0}")]
    DegenerateSemigroup(String),

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
