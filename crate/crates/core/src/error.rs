//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter violated a domain constraint (non-positive mass, empty
    /// band, inverted limits, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Oscillator has damping ratio >= 1; only oscillatory motion is modeled.
    #[error("overdamped oscillator: damping ratio {zeta:.4} >= 1")]
    Overdamped { zeta: f64 },

    /// Scene or chirp configuration is inconsistent (timing overflow,
    /// out-of-range scatterer, co-located scatterers without the co-bin flag).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Raw capture file length does not match the configured cube dimensions.
    #[error(
        "dimension mismatch: capture length {actual} bytes is not a whole number \
         of {expected}-byte frames"
    )]
    DimensionMismatch { expected: u64, actual: u64 },

    #[error("non-finite sample encountered in {0}")]
    NonFinite(&'static str),

    /// Sample value cannot be represented in the signed 16-bit raw format.
    #[error("sample {value} outside the int16 raw-capture range")]
    SampleOutOfRange { value: f64 },

    /// No range bins fall inside the configured distance limits.
    #[error("no range bins inside limits [{min_m} m, {max_m} m]")]
    EmptyRangeWindow { min_m: f64, max_m: f64 },

    #[error("range profile has zero energy everywhere")]
    ZeroEnergy,

    /// Circle fitting needs at least three non-collinear points.
    #[error("degenerate point set for circle fit: {0}")]
    DegenerateCircle(String),

    #[error("need at least {needed} {what}, got {got}")]
    TooFew {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// Channel covariance has fewer significant directions than the
    /// requested number of components.
    #[error("rank-deficient observations: rank {rank} < {requested} requested components")]
    RankDeficient { rank: usize, requested: usize },

    /// No spectral peak cleared the detection threshold inside the band.
    #[error("no vibration detected in band [{lo_hz:.3} Hz, {hi_hz:.3} Hz]")]
    NoVibration { lo_hz: f64, hi_hz: f64 },

    /// Every candidate model in the component-count search failed.
    #[error("component-count selection failed: no model could be fitted")]
    AllModelsFailed,

    #[error("config parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable category token, used by the CLI on stderr.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) | Error::Overdamped { .. } => "parameter",
            Error::Config(_) | Error::Parse(_) => "config",
            Error::Io(_) | Error::DimensionMismatch { .. } | Error::SampleOutOfRange { .. } => {
                "io"
            }
            Error::NonFinite(_) => "data",
            Error::EmptyRangeWindow { .. }
            | Error::ZeroEnergy
            | Error::DegenerateCircle(_)
            | Error::TooFew { .. } => "dsp",
            Error::RankDeficient { .. } | Error::AllModelsFailed => "bss",
            Error::NoVibration { .. } => "detection",
        }
    }
}
