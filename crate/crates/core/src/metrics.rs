//! Accuracy measures for computed factorizations.

use crate::error::{Error, Result};
use crate::factors::{Method, QrFactors};
use crate::kernels::{
    singular_values, spectral_norm, sym_eigenvalues, Matrix, SymmetricMatrix, UpperTriangular,
};

/// `‖I − QᵀQ‖₂`, from the eigenvalues of the symmetrized `I − QᵀQ`.
pub fn ortho_deviation(q: &Matrix) -> Result<f64> {
    let n = q.cols();
    let mut e = q.t_matmul(q)?.into_vec();
    for (k, x) in e.iter_mut().enumerate() {
        *x = if k % (n + 1) == 0 { 1.0 - *x } else { -*x };
    }
    let s = SymmetricMatrix::symmetrize(Matrix::from_col_major(n, n, e)?)?;
    let ev = sym_eigenvalues(&s)?;
    Ok(ev.iter().fold(0.0_f64, |a, &x| a.max(x.abs())))
}

/// `‖A − QR‖₂ / ‖A‖₂` with both norms from [`spectral_norm`].
pub fn rel_residual(a: &Matrix, f: &QrFactors) -> Result<f64> {
    if a.shape() != f.q.shape() || f.r.order() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, Q is {}x{}, R has order {}",
            a.rows(),
            a.cols(),
            f.q.rows(),
            f.q.cols(),
            f.r.order()
        )));
    }
    let diff = a.sub(&f.product()?)?;
    let na = spectral_norm(a);
    if na == 0.0 {
        return Ok(if diff.max_abs() == 0.0 {
            0.0
        } else {
            f64::INFINITY
        });
    }
    Ok(spectral_norm(&diff) / na)
}

/// Two-norm condition number `σ₁/σ_n`; `+∞` when `σ_n = 0`.
pub fn cond2(a: &Matrix) -> Result<f64> {
    let sv = singular_values(a)?;
    let (hi, lo) = (sv[0], sv[sv.len() - 1]);
    Ok(if lo == 0.0 { f64::INFINITY } else { hi / lo })
}

/// Condition number of the product `A₁·R_s`: `‖A₁‖₂‖R_s‖₂ / ‖A‖₂`.
pub fn eta(a: &Matrix, a1: &Matrix, r_s: &UpperTriangular) -> Result<f64> {
    if a.shape() != a1.shape() || r_s.order() != a.cols() {
        return Err(Error::DimensionMismatch("eta: inconsistent shapes".into()));
    }
    Ok(spectral_norm(a1) * spectral_norm(r_s.as_matrix()) / spectral_norm(a))
}

/// Result of one factorization run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub method: Method,
    pub m: usize,
    pub n: usize,
    /// Sample count; only for sampling methods.
    pub c: Option<usize>,
    pub seed: u64,
    /// `‖I − QᵀQ‖₂`; absent on breakdown.
    pub deviation: Option<f64>,
    /// `‖A − QR‖₂/‖A‖₂`; absent on breakdown.
    pub residual: Option<f64>,
    /// Measured `κ(A₁)` for preconditioned methods that did not break down.
    pub kappa_a1: Option<f64>,
    /// Target `κ(A)` of the generated matrix.
    pub kappa_a: f64,
    pub eta: Option<f64>,
    pub breakdown: bool,
    pub wall_time: f64,
}

impl TrialRecord {
    /// `4·u·κ(A₁)` when `κ(A₁)` is known.
    pub fn estimate(&self) -> Option<f64> {
        self.kappa_a1.map(crate::bounds::ortho_estimate)
    }
}
