use crate::pac::SolveStatus;
use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Outer and inner frames must have equal length before superposition.
    #[error("frame length mismatch: outer has {outer} symbols, inner has {inner}")]
    FrameLengthMismatch { outer: usize, inner: usize },

    /// Power-allocation coefficient outside the open interval (0, 0.5).
    #[error("power allocation coefficient {0} outside (0, 0.5)")]
    InvalidPac(f64),

    /// A parameter violated its domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Equivalent wiretap SNR is undefined: the legitimate channel is no
    /// better than the eavesdropper's.
    #[error("no secrecy margin: snr_leg {snr_leg_db} dB <= snr_eve {snr_eve_db} dB")]
    NoSecrecyMargin { snr_leg_db: f64, snr_eve_db: f64 },

    /// An operation needed an active power-allocation constraint but the
    /// solver reported a different status.
    #[error("power allocation constraint not active (status {0:?})")]
    PacNotActive(SolveStatus),

    /// The eavesdropper SEP failed its monotonicity precondition on the scan
    /// grid, so bisection on it would be unsound.
    #[error("eavesdropper SEP is not nonincreasing in a at snr_eve {snr_eve_db} dB")]
    NonMonotoneEveSep { snr_eve_db: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
