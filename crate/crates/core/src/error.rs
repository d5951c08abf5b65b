use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("component index {index} out of range (diagram has {count} components)")]
    ComponentOutOfRange { index: usize, count: usize },

    #[error("component {0} is the distinguished component")]
    DistinguishedComponent(usize),

    #[error("diagram has {0} crossings; the cube of resolutions is limited to {max}", max = crate::cube::MAX_CROSSINGS)]
    TooManyCrossings(usize),

    #[error("map does not commute with the differential at bidegree ({h}, {q})")]
    NotAChainMap { h: i64, q: i64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("polynomial {dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown library diagram '{0}'")]
    UnknownDiagram(String),

    #[error("{0}")]
    Io(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { pos: e.column(), msg: e.to_string() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
