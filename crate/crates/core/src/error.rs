use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid channel parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for {len} GBSs")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("maximum DoF is only defined for N > M (got N = {n_gbs}, M = {n_antennas})")]
    AssumptionViolated { n_gbs: usize, n_antennas: usize },

    #[error("stream count {n_streams} must lie in 1..={n_gbs}")]
    InvalidStreamCount { n_streams: usize, n_gbs: usize },

    #[error("oracle enumeration is limited to N <= {limit} (got N = {n_gbs})")]
    TooLargeForOracle { n_gbs: usize, limit: usize },

    #[error("GBS {gbs} appears in more than one decoding group")]
    GroupOverlap { gbs: usize },

    #[error("decoding group {group} is empty")]
    EmptyGroup { group: usize },

    #[error("group sizes sum to {got}, expected {expected}")]
    SizeSumMismatch { got: usize, expected: usize },

    #[error(
        "stream {stream}: ZF needs M > N - |group| (M = {n_antennas}, complement size = {complement})"
    )]
    InfeasibleZF {
        stream: usize,
        n_antennas: usize,
        complement: usize,
    },

    #[error("stream {stream}: numerical null space has dimension {found}, expected {expected}")]
    RankDeficiency {
        stream: usize,
        expected: usize,
        found: usize,
    },

    #[error("transmit power must be finite and nonnegative (got {0})")]
    InvalidPower(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(
        "interference check failed for trial seed {seed}: max relative residual {residual:e} exceeds {tolerance:e}"
    )]
    InterferenceViolation {
        seed: u64,
        residual: f64,
        tolerance: f64,
    },

    #[error("trial seed {seed}: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::InvalidGeometry(_)
            | Error::InvalidParameter(_)
            | Error::InvalidPower(_)
            | Error::Io(_) => 2,
            Error::InterferenceViolation { .. } => 4,
            Error::Trial { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
