use std::fmt;

/// A non-positive or non-finite pivot met during Cholesky factorization.
///
/// `stage` is 1 for a single Cholesky-QR pass and 2 for the second pass of
/// Cholesky-QR2. `pivot_index` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakdown {
    pub stage: u8,
    pub pivot_index: usize,
    pub pivot_value: f64,
}

impl fmt::Display for Breakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Cholesky breakdown in stage {} at pivot {} (value {:e})",
            self.stage, self.pivot_index, self.pivot_value
        )
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("data length {len} does not match {rows}x{cols}")]
    LengthMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is {rows}x{cols}, expected rows >= cols")]
    NotTall { rows: usize, cols: usize },

    #[error("entry ({row}, {col}) below the diagonal is nonzero")]
    NotUpperTriangular { row: usize, col: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("{0}")]
    Breakdown(Breakdown),

    #[error("triangular factor has zero or non-finite diagonal entry {index} ({value:e})")]
    SingularTriangular { index: usize, value: f64 },

    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("columns are not orthonormal: deviation {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("sampled matrix is numerically rank deficient: {0}")]
    RankDeficientSample(String),

    #[error("invalid argument: {0}")]
    Domain(String),
}

impl From<Breakdown> for Error {
    fn from(b: Breakdown) -> Self {
        Error::Breakdown(b)
    }
}

impl Error {
    /// The breakdown payload, if this error is a Cholesky breakdown.
    pub fn as_breakdown(&self) -> Option<&Breakdown> {
        match self {
            Error::Breakdown(b) => Some(b),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
