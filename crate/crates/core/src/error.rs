use thiserror::Error;

/// Errors raised by constructions, maps, searches and document IO.
///
/// A failed search is not an error: chain and cover searches report
/// "not found within budget" through their return values instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for a complex with {len} vertices")]
    VertexOutOfRange { index: usize, len: usize },

    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),

    #[error("a complex needs at least one generating simplex")]
    EmptyComplex,

    #[error("simplices must be non-empty")]
    EmptySimplex,

    #[error("simplex {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),

    #[error("vertex {0:?} does not lie in any simplex")]
    UnusedVertex(String),

    #[error("{0:?} is not a simplex of the ambient complex")]
    NotASimplex(Vec<usize>),

    #[error("complexes do not match: {0}")]
    Mismatch(&'static str),

    #[error("map is not simplicial: image of {simplex:?} is not a simplex")]
    NotSimplicial { simplex: Vec<usize> },

    #[error("invalid permutation: {0}")]
    BadPermutation(String),

    #[error("target length {target} is shorter than the chain length {len}")]
    ChainTooShort { target: usize, len: usize },

    #[error("contiguity assertion failed: {0}")]
    ContiguityAssertion(String),

    #[error(
        "size guardrail: subdividing level {level} would produce {projected} top simplices (budget {budget})"
    )]
    SizeGuardrail {
        level: usize,
        projected: u128,
        budget: u128,
    },

    #[error("point lies outside the realization")]
    OutsideRealization,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("missing coordinates for vertex {0:?}")]
    MissingCoordinates(String),

    #[error("path parameter {0} outside [0, 1]")]
    TimeOutOfRange(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown example {0:?}")]
    UnknownExample(String),

    #[error("unsupported document format {0:?}")]
    UnsupportedFormat(String),

    #[error("expected a {expected} document, found {found:?}")]
    WrongKind { expected: &'static str, found: String },

    #[error("label {0:?} does not match the rebuilt tower")]
    LabelMismatch(String),

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
