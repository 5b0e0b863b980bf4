use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed hexadecimal literal {0:?}")]
    MalformedHex(String),
    #[error("value does not fit in {width} bits")]
    OutOfRange { width: usize },
    #[error("bit vectors must have a positive width")]
    ZeroWidth,
    #[error("width mismatch: {left} vs {right} bits")]
    WidthMismatch { left: usize, right: usize },
    #[error("unsupported width {width}: {reason}")]
    UnsupportedWidth { width: usize, reason: &'static str },
    #[error("index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },
    #[error("gate indices must satisfy i < j <= {n}, got ({i}, {j})")]
    IndexOrder { i: usize, j: usize, n: usize },
    #[error("{what} needs at least {needed} rows, got {got}")]
    TooFewRows {
        what: &'static str,
        needed: usize,
        got: usize,
    },
    #[error("quantizer capacity {capacity} cannot consume {rows} rows")]
    CapacityExceeded { rows: usize, capacity: usize },
    #[error("quantizer capacity must be at least 3, got {0}")]
    InvalidCapacity(usize),
    #[error("level {level} is already the final level")]
    FinalLevel { level: u32 },
    /// A property the circuit model guarantees was violated. Unreachable for
    /// well-formed inputs; reaching it means the model itself is wrong.
    #[error("model integrity fault: {0}")]
    IntegrityFault(String),
}

impl Error {
    pub(crate) fn fault(msg: impl Into<String>) -> Self {
        Error::IntegrityFault(msg.into())
    }
}
