use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("interval endpoints {lo} and {hi} must satisfy 0 <= lo <= hi <= 1")]
    OutOfUnitInterval { lo: String, hi: String },
    #[error("interval with lo = hi = {0} must be closed at both ends")]
    EmptyInterval(String),
    #[error("interval {0} is degenerate")]
    DegenerateInterval(String),
    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(String),
    #[error("operation requires step functions, got a symbolic term")]
    KindMismatch,
    #[error("index ordering violated: need {lo} < {hi}")]
    Ordering { lo: u64, hi: u64 },
    #[error("sequence kind {kind} is not supported by {op}")]
    UnsupportedKind { kind: &'static str, op: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("frequency must be nonzero")]
    ZeroFrequency,
    #[error("partial integrals provably decrease between R = {lo} and R = {hi}")]
    MonotonicityViolation { lo: String, hi: String },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}
