use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("QR iteration did not converge for eigenvalue {index} after {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },
    #[error("diagonal entries {i} and {j} of T coincide; the triangular equation is singular")]
    Separation { i: usize, j: usize },
    #[error("non-finite entry in the solution of the triangular equation")]
    NonFinite,
    #[error("matrix is numerically rank deficient (|r_{index}{index}| too small)")]
    RankDeficient { index: usize },
    #[error("2-norm estimate {norm} is not below sqrt(3); Newton-Schulz would not converge")]
    NormTooLarge { norm: f64 },
    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:e}")]
    NotSymmetric { asymmetry: f64 },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("dimension {n} exceeds the cap of {cap}")]
    DimensionCap { n: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}
