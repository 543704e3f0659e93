//! Cholesky-QR variants.
//!
//! * [`cholesky_qr`]: Gram matrix, Cholesky, triangular solve.
//! * [`cholesky_qr2`]: two passes of Cholesky-QR.
//! * [`preconditioned_cholesky_qr`]: Cholesky-QR of `A₁ = A R_s⁻¹`, then
//!   `R = R₂ R_s`.
//! * [`rp_cholesky_qr`]: the preconditioner `R_s` is the triangular factor of
//!   a uniformly sampled, randomly smoothed copy of `A`.

use crate::error::{Breakdown, Error, Result};
use crate::factors::{Method, QrFactors};
use crate::kernels::{
    check_nonsingular, cholesky, gram, householder_qr, householder_r, singular_values,
    tri_solve_right, Matrix, UpperTriangular,
};
use crate::transforms::{draw_sample, rademacher_diag, smooth, RowSample, SignDiagonal};

/// The randomized preconditioner of one [`rp_cholesky_qr`] run.
#[derive(Debug, Clone)]
pub struct PreconditionerInfo {
    pub r_s: UpperTriangular,
    pub sample: RowSample,
    pub signs: SignDiagonal,
    /// `κ(A₁)`, filled in by callers that measure it.
    pub kappa_a1: Option<f64>,
}

/// Output of [`preconditioned_cholesky_qr`].
#[derive(Debug, Clone)]
pub struct PreconditionedQr {
    pub factors: QrFactors,
    /// `A₁ = A R_s⁻¹`.
    pub a1: Matrix,
}

/// Output of [`rp_cholesky_qr`].
#[derive(Debug, Clone)]
pub struct RpCholeskyQr {
    pub factors: QrFactors,
    pub info: PreconditionerInfo,
    pub a1: Matrix,
}

fn require_tall(a: &Matrix) -> Result<()> {
    if a.rows() < a.cols() {
        return Err(Error::NotTall {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(())
}

fn at_stage(stage: u8) -> impl Fn(Breakdown) -> Error {
    move |b| Error::Breakdown(Breakdown { stage, ..b })
}

/// Basic Cholesky-QR: `G = AᵀA`, `G = RᵀR`, `Q = A R⁻¹`.
pub fn cholesky_qr(a: &Matrix) -> Result<QrFactors> {
    require_tall(a)?;
    let r = cholesky(&gram(a)?)?;
    let q = tri_solve_right(a, &r)?;
    Ok(QrFactors {
        q,
        r,
        method: Method::Basic,
    })
}

/// Cholesky-QR2: Cholesky-QR of `A`, then of the resulting `Q₁`;
/// `R = R₂ R₁`. A breakdown reports the stage (1 or 2) where it happened.
pub fn cholesky_qr2(a: &Matrix) -> Result<QrFactors> {
    require_tall(a)?;
    let first = cholesky_qr(a).map_err(|e| match e {
        Error::Breakdown(b) => at_stage(1)(b),
        other => other,
    })?;
    let second = cholesky_qr(&first.q).map_err(|e| match e {
        Error::Breakdown(b) => at_stage(2)(b),
        other => other,
    })?;
    Ok(QrFactors {
        q: second.q,
        r: second.r.mul_upper(&first.r)?,
        method: Method::CholeskyQr2,
    })
}

/// Cholesky-QR of the preconditioned matrix `A₁ = A R_s⁻¹`, with the
/// triangular factor recovered as `R = R₂ R_s`.
pub fn preconditioned_cholesky_qr(a: &Matrix, r_s: &UpperTriangular) -> Result<PreconditionedQr> {
    require_tall(a)?;
    check_nonsingular(r_s)?;
    let a1 = tri_solve_right(a, r_s)?;
    let inner = cholesky_qr(&a1)?;
    let r = inner.r.mul_upper(r_s)?;
    Ok(PreconditionedQr {
        factors: QrFactors {
            q: inner.q,
            r,
            method: Method::Preconditioned,
        },
        a1,
    })
}

/// Builds the randomized preconditioner: smooth `A` with signs from `seed`,
/// sample `c` rows with replacement, and take the Householder `R` of the
/// `c×n` sample.
///
/// Fails with `RankDeficientSample` when fewer than `n` distinct rows were
/// drawn or the sampled `R` has an exactly zero or non-finite diagonal.
pub fn randomized_preconditioner(a: &Matrix, c: usize, seed: u64) -> Result<PreconditionerInfo> {
    require_tall(a)?;
    let (m, n) = a.shape();
    if c < n {
        return Err(Error::Domain(format!("sample count c = {c} below n = {n}")));
    }
    let signs = rademacher_diag(m, seed)?;
    let sample = draw_sample(m, c, seed)?;
    let distinct = sample.distinct();
    if distinct < n {
        return Err(Error::RankDeficientSample(format!(
            "{distinct} distinct rows for {n} columns"
        )));
    }
    let fa = smooth(a, &signs)?;
    let a_s = sample.apply(&fa)?;
    // Only R_s is needed downstream, so Q_s is never formed.
    let r_s = householder_r(&a_s)?;
    if let Err(Error::SingularTriangular { index, value }) = check_nonsingular(&r_s) {
        return Err(Error::RankDeficientSample(format!(
            "diagonal entry {index} of R_s is {value:e}"
        )));
    }
    Ok(PreconditionerInfo {
        r_s,
        sample,
        signs,
        kappa_a1: None,
    })
}

/// Randomized preconditioned Cholesky-QR with `c` sampled rows.
///
/// Deterministic in `(A, c, seed)`. Signs and sample indices come from
/// separate streams of `seed` (see [`crate::rng`]).
pub fn rp_cholesky_qr(a: &Matrix, c: usize, seed: u64) -> Result<RpCholeskyQr> {
    let info = randomized_preconditioner(a, c, seed)?;
    let PreconditionedQr { mut factors, a1 } = preconditioned_cholesky_qr(a, &info.r_s)?;
    factors.method = Method::RpCholesky;
    Ok(RpCholeskyQr { factors, info, a1 })
}

/// Singular values of `S F Q`, where `Q` is the Householder orthonormal
/// factor of `A` and `S`, `F` are the realized sample and smoothing of
/// `info`. They are the reciprocals of the singular values of `A₁`.
pub fn sampled_frame_singular_values(a: &Matrix, info: &PreconditionerInfo) -> Result<Vec<f64>> {
    let q = householder_qr(a)?.q;
    let sfq = info.sample.apply(&smooth(&q, &info.signs)?)?;
    singular_values(&sfq)
}
