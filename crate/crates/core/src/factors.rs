use std::fmt;
use std::str::FromStr;

use crate::kernels::{Matrix, UpperTriangular};

/// Which algorithm produced a factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Householder,
    Basic,
    CholeskyQr2,
    Preconditioned,
    RpCholesky,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Householder => "householder",
            Method::Basic => "basic",
            Method::CholeskyQr2 => "cqr2",
            Method::Preconditioned => "precond",
            Method::RpCholesky => "rp",
        }
    }

    /// Whether the method runs Cholesky-QR on a preconditioned matrix.
    pub fn is_preconditioned(self) -> bool {
        matches!(self, Method::Preconditioned | Method::RpCholesky)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "householder" => Ok(Method::Householder),
            "basic" => Ok(Method::Basic),
            "cqr2" => Ok(Method::CholeskyQr2),
            "precond" | "preconditioned" => Ok(Method::Preconditioned),
            "rp" | "rpcholesky" => Ok(Method::RpCholesky),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// Thin QR factors `A = Q R` with `Q` m×n and `R` n×n upper triangular.
#[derive(Debug, Clone)]
pub struct QrFactors {
    pub q: Matrix,
    pub r: UpperTriangular,
    pub method: Method,
}

impl QrFactors {
    /// `Q * R`.
    pub fn product(&self) -> crate::Result<Matrix> {
        self.q.matmul(self.r.as_matrix())
    }
}
