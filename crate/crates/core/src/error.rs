use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("pairing is degenerate")]
    DegeneratePairing,

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("nerve has no faces")]
    EmptyNerve,

    #[error("invalid nerve: {0}")]
    InvalidNerve(String),

    #[error("{0} is not a face of the nerve")]
    NotAFace(String),

    #[error("d1 o d1 is nonzero at (p, q) = ({p}, {q})")]
    D1SquareNonzero { p: i64, q: i64 },

    #[error("missing data: {0}")]
    MissingData(String),

    #[error("missing torus restriction in degree {0}")]
    MissingRestriction(usize),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("({s}, {t}) is not a primitive vector")]
    NotPrimitive { s: String, t: String },

    #[error("matrix is not a positive Dehn twist: {0}")]
    NotAPositiveTwist(String),

    #[error("position {pos} out of range for word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("empty twist word")]
    EmptyWord,

    #[error("parse error: {0}")]
    Parse(String),
}
