use thiserror::Error;

/// Errors raised by the kernel, the samplers and the experiment harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("points of the tropical projective torus need at least {min} coordinates, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("empty vector")]
    EmptyVector,

    #[error("segment endpoints coincide")]
    DegenerateSegment,

    #[error("parameter {t} outside the domain [0, {len}]")]
    OutsideDomain { t: String, len: String },

    #[error("side lengths ({a}, {b}, {c}) violate the triangle inequality")]
    InvalidSideLengths { a: String, b: String, c: String },

    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },

    #[error("triangle has coinciding vertices")]
    DuplicateVertices,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("polytope is infeasible")]
    Infeasible,

    #[error("polytope has empty interior in its affine hull")]
    LowerDimensional,

    #[error("polytope is unbounded")]
    Unbounded,

    #[error("start point is not strictly interior")]
    NotInterior,

    #[error("unknown inequality system `{0}`")]
    UnknownSystem(String),

    #[error("gave up after {tries} tries ({accepted} accepted)")]
    TriesExhausted { tries: usize, accepted: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
