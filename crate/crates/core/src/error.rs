use thiserror::Error;

/// Errors raised by braid arithmetic and by the layers built on top of it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("generator index {index} out of range for {n} strands")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("cannot parse braid word token {0:?}")]
    BadToken(String),
    #[error("table is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("factor sequence is not in left canonical form: {0}")]
    NotCanonical(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> BraidError {
    BraidError::InvalidParameter(msg.into())
}
