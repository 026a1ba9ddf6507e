use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a probability: {0}")]
    NotAProbability(String),
    #[error("state index {index} out of range for a space of {n} states")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("conditioning event has zero mass")]
    ZeroMassEvent,
    #[error("blocks overlap at state {0}")]
    OverlappingBlocks(usize),
    #[error("state {0} is not covered by any block")]
    UncoveredStates(usize),
    #[error("partition contains an empty block")]
    EmptyBlock,
    #[error("approximate atoms are ambiguous: states {x} and {y} share a cluster but differ by more than epsilon")]
    AmbiguousAtoms { x: usize, y: usize },
    #[error("state space of size {n} exceeds the limit {max}")]
    TooLarge { n: usize, max: usize },
    #[error("unknown law `{0}`")]
    UnknownLaw(String),
    #[error("float mode is refused for exact oracle and falsifier runs")]
    FloatModeRefused,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("instance does not violate law {0}")]
    NotACounterexample(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
