//! Randomized smoothing and uniform row sampling.
//!
//! The smoothing operator is `F = C·D`, where `D` is a diagonal of
//! independent Rademacher signs and `C` the orthonormal DCT-II applied to
//! each column. Rows of `F·A` are then sampled uniformly with replacement
//! and scaled by `√(m/c)`.

use rand::RngExt;
use rustdct::DctPlanner;

use crate::error::{Error, Result};
use crate::kernels::Matrix;
use crate::metrics::ortho_deviation;
use crate::rng::{stream_rng, streams};

/// Diagonal of ±1 entries drawn from `(seed, SIGNS)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignDiagonal {
    pub signs: Vec<i8>,
    pub seed: u64,
}

impl SignDiagonal {
    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.signs.iter().map(|&s| f64::from(s)).collect()
    }

    /// `D * A`.
    pub fn apply(&self, a: &Matrix) -> Result<Matrix> {
        a.scale_rows(&self.as_f64())
    }
}

/// `m` Rademacher signs. Each sign is `sign(u - 1/2)` for `u` uniform on
/// `[0, 1)`, with the measure-zero tie `u = 1/2` mapped to `+1`.
pub fn rademacher_diag(m: usize, seed: u64) -> Result<SignDiagonal> {
    if m == 0 {
        return Err(Error::Domain("sign diagonal needs m >= 1".into()));
    }
    let mut rng = stream_rng(seed, streams::SIGNS);
    let signs = (0..m)
        .map(|_| {
            let u: f64 = rng.random();
            if u < 0.5 {
                -1
            } else {
                1
            }
        })
        .collect();
    Ok(SignDiagonal { signs, seed })
}

/// Orthonormal DCT-II of every column:
/// `(Cx)_k = s_k Σ_j x_j cos(π(2j+1)k / 2m)`, `s_0 = √(1/m)`, `s_k = √(2/m)`.
pub fn dct_columns(a: &Matrix) -> Matrix {
    let m = a.rows();
    let mut planner = DctPlanner::new();
    let dct = planner.plan_dct2(m);
    let mut scratch = vec![0.0; dct.get_scratch_len()];
    let mut out = a.as_slice().to_vec();
    let (s0, sk) = ((1.0 / m as f64).sqrt(), (2.0 / m as f64).sqrt());
    for col in out.chunks_exact_mut(m) {
        dct.process_dct2_with_scratch(col, &mut scratch);
        col[0] *= s0;
        col[1..].iter_mut().for_each(|x| *x *= sk);
    }
    Matrix::from_computed(m, a.cols(), out).expect("orthonormal transform of finite data")
}

/// O(m²) reference for [`dct_columns`], summing the cosine series directly.
pub fn dct_columns_naive(a: &Matrix) -> Matrix {
    let (m, n) = a.shape();
    // cos(π t / 2m) for t in [0, 4m); (2j+1)k is reduced mod 4m.
    let period = 4 * m;
    let table: Vec<f64> = (0..period)
        .map(|t| (std::f64::consts::PI * t as f64 / (2 * m) as f64).cos())
        .collect();
    let (s0, sk) = ((1.0 / m as f64).sqrt(), (2.0 / m as f64).sqrt());
    let mut out = vec![0.0; m * n];
    for j in 0..n {
        let x = a.col(j);
        for k in 0..m {
            let mut s = 0.0;
            for (i, &xi) in x.iter().enumerate() {
                s += xi * table[((2 * i + 1) * k) % period];
            }
            out[k + j * m] = if k == 0 { s0 * s } else { sk * s };
        }
    }
    Matrix::from_computed(m, n, out).expect("orthonormal transform of finite data")
}

/// `F·A = C·(D·A)`.
pub fn smooth(a: &Matrix, signs: &SignDiagonal) -> Result<Matrix> {
    if signs.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} signs for {} rows",
            signs.len(),
            a.rows()
        )));
    }
    Ok(dct_columns(&signs.apply(a)?))
}

/// Realized sampling operator: `c` row indices in `[0, m)`, drawn with
/// replacement, and the common scale `√(m/c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSample {
    pub m: usize,
    pub indices: Vec<usize>,
    pub scale: f64,
    pub seed: u64,
}

impl RowSample {
    pub fn c(&self) -> usize {
        self.indices.len()
    }

    /// Sample with explicitly chosen indices.
    pub fn from_indices(m: usize, indices: Vec<usize>, seed: u64) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Domain("sample needs c >= 1".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= m) {
            return Err(Error::Domain(format!(
                "row index {bad} out of range for m = {m}"
            )));
        }
        let scale = (m as f64 / indices.len() as f64).sqrt();
        Ok(Self {
            m,
            indices,
            scale,
            seed,
        })
    }

    /// Number of distinct sampled rows.
    pub fn distinct(&self) -> usize {
        let mut seen = self.indices.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// `S * X`: the selected rows of `X`, each multiplied by `√(m/c)`.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.rows() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "sample drawn for {} rows applied to {}",
                self.m,
                x.rows()
            )));
        }
        x.select_rows(&self.indices, self.scale)
    }
}

/// Draws `c` indices i.i.d. uniform on `[0, m)` from `(seed, SAMPLE)`.
pub fn draw_sample(m: usize, c: usize, seed: u64) -> Result<RowSample> {
    if c == 0 || m == 0 {
        return Err(Error::Domain(format!(
            "need c >= 1 and m >= 1, got c = {c}, m = {m}"
        )));
    }
    let mut rng = stream_rng(seed, streams::SAMPLE);
    let indices = (0..c).map(|_| rng.random_range(0..m)).collect();
    RowSample::from_indices(m, indices, seed)
}

/// Samples `c` rows of `fa` uniformly with replacement and scales them by
/// `√(m/c)`. The indices are drawn before any arithmetic and returned.
pub fn sample_rows(fa: &Matrix, c: usize, seed: u64) -> Result<(Matrix, RowSample)> {
    let sample = draw_sample(fa.rows(), c, seed)?;
    Ok((sample.apply(fa)?, sample))
}

/// Largest squared row norm of a matrix with orthonormal columns.
///
/// Fails with `NotOrthonormal` when `‖QᵀQ − I‖₂ > 1e-8`.
pub fn coherence(q: &Matrix) -> Result<f64> {
    let deviation = ortho_deviation(q)?;
    if deviation > 1e-8 {
        return Err(Error::NotOrthonormal { deviation });
    }
    let (m, n) = q.shape();
    let mut row_sq = vec![0.0; m];
    for j in 0..n {
        for (s, &x) in row_sq.iter_mut().zip(q.col(j)) {
            *s += x * x;
        }
    }
    Ok(row_sq.into_iter().fold(0.0, f64::max))
}
