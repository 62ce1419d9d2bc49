//! Error types shared across the crate.

use thiserror::Error;

use crate::identify::AlphaSearchTrace;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mode dimension must be at least 2, got {0}")]
    ZeroDimension(usize),

    #[error("total dimension {got} exceeds the configured cap of {cap}")]
    Overflow { got: u128, cap: usize },

    #[error("the diagonal shift is only defined for one-mode spaces, got {0} modes")]
    ShiftUnsupported(usize),

    #[error("length {got} does not match the expected {expected}")]
    LengthMismatch { got: usize, expected: usize },

    #[error("polynomial uses {got} variables but the space has {expected} modes")]
    VariableCountMismatch { got: usize, expected: usize },

    #[error("operator dimensions differ: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("time {t} lies outside [{lo}, {hi}]")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("matrix is not Hermitian: max |H - H^†| element is {0:.3e}")]
    NotHermitian(f64),

    #[error("eigensolver failed to converge on a {0}x{0} matrix")]
    ConvergenceFailure(usize),

    #[error("ground level of the initial Hamiltonian is degenerate (gap {0:.3e})")]
    DegenerateStart(f64),

    #[error("state norm drifted to {norm} at t = {t}; increase substeps")]
    NormDrift { t: f64, norm: f64 },

    #[error("alpha search did not converge within {rounds} rounds")]
    NoConvergence {
        rounds: usize,
        trace: AlphaSearchTrace,
    },

    #[error("problem Hamiltonian has a fixed dimension and cannot grow with the truncation")]
    FixedDimension,

    #[error("polynomial parse error: {0}")]
    PolynomialParse(String),

    #[error("integer overflow evaluating the polynomial at {0:?}")]
    PolynomialOverflow(Vec<usize>),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
