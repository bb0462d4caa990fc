use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("PayloadExhausted: needed {needed} bits, {available} remain")]
    PayloadExhausted { needed: u64, available: u64 },
    #[error("BadMagic: {0:?}")]
    BadMagic([u8; 4]),
    #[error("BadVersion: {0}")]
    BadVersion(u8),
    #[error("BadMode: {0}")]
    BadMode(u8),
    #[error("BadProbability: {0}")]
    BadProbability(f64),
    #[error("BadHeader: {0}")]
    BadHeader(String),
    #[error("WeightMismatch: expected {expected}, sequence has {actual}")]
    WeightMismatch { expected: u64, actual: u64 },
    #[error("WeightOutOfRange: k={k} for n={n}")]
    WeightOutOfRange { k: u64, n: u64 },
    #[error("RankOutOfRange: rank does not fit C({n},{k})")]
    RankOutOfRange { n: u64, k: u64 },
    #[error("KOutOfRange: decoded weight outside 0..={n}")]
    KOutOfRange { n: u64 },
    #[error("NonCanonical: F=1 with d=0")]
    NonCanonical,
    #[error("InvalidModel: {0}")]
    InvalidModel(String),
    #[error("InvalidProbability: {0}")]
    InvalidProbability(f64),
    #[error("LengthMismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: u64, actual: u64 },
    #[error("InvalidGraph: {0}")]
    InvalidGraph(String),
    #[error("DegenerateDistribution: fewer than two symbols with nonzero probability")]
    DegenerateDistribution,
    #[error("TooLarge: n={n} exceeds the limit {limit}")]
    TooLarge { n: u64, limit: u64 },
    #[error("Parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
