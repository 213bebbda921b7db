use thiserror::Error;

use crate::obstruction::Obstruction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("operation `{op}` is not supported over {ring}")]
    UnsupportedRing { op: &'static str, ring: String },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid scalar `{0}`")]
    InvalidScalar(String),

    #[error("object mismatch: {0}")]
    ObjectMismatch(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),

    #[error("pair is not chainwise split at degree {degree}")]
    NotChainwiseSplit { degree: i64 },

    #[error("pair is not exact at degree {degree}")]
    NotExact { degree: i64 },

    #[error("input is not in normalized form: {0}")]
    NotNormalized(String),

    #[error("invalid bigraded system: {0}")]
    InvalidSystem(String),

    #[error("unbounded support: {0}")]
    UnboundedSupport(String),

    #[error("obstruction: {0}")]
    Obstruction(Box<Obstruction>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn objects(msg: impl Into<String>) -> Self {
        Error::ObjectMismatch(msg.into())
    }
}

impl From<Obstruction> for Error {
    fn from(o: Obstruction) -> Self {
        Error::Obstruction(Box::new(o))
    }
}
