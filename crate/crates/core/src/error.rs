use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown lattice base `{0}`")]
    UnknownBase(String),

    #[error("invalid scale {0}; scales must be nonzero")]
    ZeroScale(i64),

    #[error("lattice is degenerate")]
    Degenerate,

    #[error("glue vector {index} is not in the dual lattice")]
    NotInDual { index: usize },

    #[error("glue vectors do not define an integral overlattice: {0}")]
    NonIntegralGlue(String),

    #[error("classification not applicable: {0}")]
    Classification(String),

    #[error("class {index} has self-intersection {found}, expected {expected}")]
    SelfIntersection {
        index: usize,
        found: String,
        expected: String,
    },

    #[error("classes {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),

    #[error("classes mix signs; only uniform-sign configurations are supported")]
    MixedSigns,

    #[error("operator is not an involution on homology")]
    NotInvolution,

    #[error("unknown building block `{0}`")]
    UnknownBlock(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("fundamental group mismatch: {0}")]
    FundamentalGroup(String),

    #[error("configuration rejected: {}", .0.join("; "))]
    Violations(Vec<String>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// True for errors caused by bad input rather than broken internal state.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}
