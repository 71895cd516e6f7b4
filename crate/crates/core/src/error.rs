use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("non-integer exponent or operand: {0}")]
    Unsupported(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("hyperplanes {0} and {1} coincide")]
    DuplicateHyperplane(usize, usize),
    #[error("form {0} has zero linear part")]
    ZeroForm(usize),
    #[error("expected {expected} entries, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("element is not closed: {0}")]
    NotClosed(String),
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("bar length {got} exceeds truncation {max}")]
    Truncation { got: usize, max: usize },
    #[error("letter {0} has no character label")]
    MissingLabel(usize),
    #[error("invalid dga: {0}")]
    InvalidDga(String),
    #[error("unsupported degree {0} (maximum {1})")]
    UnsupportedDegree(usize, usize),
    #[error("loop passes within {distance:e} of hyperplane {hyperplane}")]
    LoopTouchesHyperplane { hyperplane: usize, distance: f64 },
    #[error("scalar {0} is not a rational number; specialize r first")]
    NonNumeric(String),
    #[error("meridian construction failed: {0}")]
    Meridian(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
