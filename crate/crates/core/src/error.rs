use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("size mismatch: expected {expected} values, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("fields live on different lattices")]
    LatticeMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field is not Hermitian (physical values are not real); required for L^{p} norms with p != 2")]
    NonHermitian { p: f64 },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("simulation blew up at t = {t}: {reason}")]
    BlowUp { t: f64, reason: String },

    #[error("no positive decay rate fits the Green's matrix bound (worst |xi| = {xi}, t = {t}, max entry = {entry})")]
    NoDecayRate { xi: f64, t: f64, entry: f64 },

    #[error("value {value} at index {index} is not positive; log-log fit impossible")]
    NonPositive { index: usize, value: f64 },

    #[error("malformed VDSF data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
