use thiserror::Error;

/// Errors produced by the diagonalization and entanglement pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ring size N={0}: must be even and in 4..={max}", max = crate::basis::MAX_SITES)]
    InvalidSize(usize),

    #[error("reversed-spin count r={r} out of range for N={n}")]
    InvalidSector { n: usize, r: usize },

    #[error("symmetrized N=4 basis only exists for r in {{1, 2}}, got r={0}")]
    InvalidSymmetrizedSector(usize),

    #[error("invalid couplings J1={j1}, J2={j2}: both must be finite and >= 0, not both zero")]
    InvalidCouplings { j1: f64, j2: f64 },

    #[error("invalid site pair ({a}, {b}) for N={n}")]
    InvalidSites { n: usize, a: usize, b: usize },

    #[error("sites ({a}, {b}) are not nearest neighbours on the ring")]
    NotAdjacent { a: usize, b: usize },

    #[error("vector length {got} does not match sector dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sector dimension {dim} exceeds the dense cap {cap}")]
    TooLargeForDense { dim: usize, cap: usize },

    #[error("vector is not normalized (|norm - 1| = {0:e})")]
    NotNormalized(f64),

    #[error("Lanczos did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("ground state is degenerate (gap {gap:e}); concurrence is undefined")]
    DegenerateGroundState { gap: f64 },

    #[error("bond-class concurrences disagree by {0:e}")]
    BondClassMismatch(f64),

    #[error("finite-difference step h={0} outside [1e-7, 1e-3] or pushes J1 negative")]
    InvalidStep(f64),

    #[error("invalid sweep configuration: {0}")]
    InvalidSweep(String),

    #[error("no sign change of the signed concurrence in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("{0} verification check(s) failed")]
    VerificationFailed(usize),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. }
                | Error::DegenerateGroundState { .. }
                | Error::BondClassMismatch(_)
                | Error::NoRoot { .. }
                | Error::VerificationFailed(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
