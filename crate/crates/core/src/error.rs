use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("point {point} lies on line {line}")]
    PointOnLine { point: usize, line: usize },
    #[error("two chain vertices share the x-coordinate {0}")]
    DuplicateX(String),
    #[error("operation requires a non-empty chain")]
    EmptyChain,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("point {0} lies on an arrangement edge")]
    OnBoundary(usize),
    #[error("segments {0} and {1} are not disjoint")]
    SegmentsCross(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header declares {expected} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
