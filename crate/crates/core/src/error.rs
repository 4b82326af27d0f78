use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("grid mismatch between fields")]
    GridMismatch,

    #[error("frequency mismatch between fields ({0} Hz vs {1} Hz)")]
    FrequencyMismatch(f64, f64),

    #[error("model kind {kind} does not belong to the {family} family")]
    WrongModelFamily { kind: String, family: &'static str },

    #[error("invalid model parameters: {0}")]
    InvalidModelParams(String),

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("max_lag {max_lag} m too large for window ({limit} m allowed)")]
    MaxLagTooLarge { max_lag: f64, limit: f64 },

    #[error("fit rejected: {0}")]
    FitRejected(String),

    #[error("bandpass passband is empty after taper")]
    EmptyPassband,

    #[error("unknown estimator {0:?}")]
    UnknownEstimator(String),

    #[error("region selects no valid cells")]
    EmptyRegion,

    #[error("overlapping phantom regions at sample ({0}, {1})")]
    OverlappingRegions(usize, usize),

    #[error("bad magic (not an RWF1/RWT1 file)")]
    BadMagic,

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: u64, found: u64 },

    #[error("phasor extraction: {0}")]
    PhasorExtraction(String),

    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
