use crate::exact::ParseScalarError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero direction is not a valid ray")]
    ZeroDirection,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("index {index} out of range for a ground set of {len} points")]
    InvalidIndex { index: usize, len: usize },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error(transparent)]
    Scalar(#[from] ParseScalarError),

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("points {offenders:?} are not extreme in the hull of the ground set")]
    NotExtreme { offenders: Vec<usize> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("oracle bound exceeded: {size} points > {bound}")]
    OracleBound { size: usize, bound: usize },

    #[error("no cycle found within {0} iterations")]
    MaxIterations(usize),

    #[error("rejection sampling budget of {0} attempts exhausted")]
    RejectionBudget(usize),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
