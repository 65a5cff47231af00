use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input: at least one point is required")]
    EmptyInput,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("frame of size {0} exceeds the supported maximum of 16")]
    FrameTooLarge(usize),

    #[error("contexts differ ({left:?} vs {right:?}); nothing can be said about the combination unless no interaction is assumed")]
    ContextMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("the set is empty")]
    EmptySet,

    #[error("invalid bounds at coordinate {index}: lower {lower} > upper {upper}")]
    InvalidBounds {
        index: usize,
        lower: f64,
        upper: f64,
    },

    #[error("total conflict: the observation has probability zero under every admissible model")]
    TotalConflict,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
