use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} is not a member of the cone")]
    NotMember { what: String },

    #[error("invalid quasi-norm: {0}")]
    InvalidQuasiNorm(String),

    #[error("subcone is not contained in the ambient cone: {0}")]
    NotSubcone(String),

    #[error(
        "lineality space G_Y is not closed in the d_p topology (witness {witness}); \
         the infimum functional on X/Y is only a prenorm: it vanishes on a nonzero class"
    )]
    NotClosed { witness: String },

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("linear map does not send the source cone into the target cone: {0}")]
    MapLeavesCone(String),

    #[error("incompatible spaces: {0}")]
    SpaceMismatch(String),

    #[error("{family}: exact decomposition needs {pieces} linear pieces, above the limit of {limit}")]
    Unsupported {
        family: String,
        pieces: usize,
        limit: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
