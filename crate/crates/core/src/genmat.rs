//! Seeded test matrices with prescribed singular values.

use std::fmt;
use std::io::{self, Read, Write};
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::kernels::{householder_qr, Matrix};
use crate::rng::{stream_rng, streams};

/// Distribution of singular values between `1` and `1/κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpectrumMode {
    /// `σ_i = κ^{-(i-1)/(n-1)}`.
    #[default]
    Geometric,
    /// `σ_i = 1 - (1 - 1/κ)(i-1)/(n-1)`.
    Arithmetic,
    /// `σ_1 = … = σ_{n-1} = 1`, `σ_n = 1/κ`.
    OneSmall,
}

impl FromStr for SpectrumMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "geometric" => Ok(Self::Geometric),
            "arithmetic" => Ok(Self::Arithmetic),
            "one_small" => Ok(Self::OneSmall),
            other => Err(format!("unknown spectrum mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSpec {
    pub n: usize,
    pub kappa: f64,
    pub mode: SpectrumMode,
}

impl SpectrumSpec {
    pub fn geometric(n: usize, kappa: f64) -> Self {
        Self {
            n,
            kappa,
            mode: SpectrumMode::Geometric,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Domain("spectrum needs n >= 1".into()));
        }
        if !(self.kappa.is_finite() && self.kappa >= 1.0) {
            return Err(Error::Domain(format!(
                "kappa must be >= 1, got {}",
                self.kappa
            )));
        }
        Ok(())
    }

    /// Singular values in descending order, `σ_1 = 1`.
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.n;
        if n == 1 {
            return vec![1.0];
        }
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                let t = i as f64 / last;
                match self.mode {
                    SpectrumMode::Geometric => self.kappa.powf(-t),
                    SpectrumMode::Arithmetic => 1.0 - (1.0 - 1.0 / self.kappa) * t,
                    SpectrumMode::OneSmall => {
                        if i + 1 == n {
                            1.0 / self.kappa
                        } else {
                            1.0
                        }
                    }
                }
            })
            .collect()
    }
}

fn gaussian_frame(m: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<Matrix> {
    if n == 0 || m < n {
        return Err(Error::Domain(format!(
            "need 1 <= n <= m, got m = {m}, n = {n}"
        )));
    }
    let data = (0..m * n)
        .map(|_| StandardNormal.sample(&mut *rng))
        .collect();
    // Householder QR with nonnegative diag(R) makes Q Haar distributed.
    Ok(householder_qr(&Matrix::from_col_major(m, n, data)?)?.q)
}

/// Haar-distributed `m×n` matrix with orthonormal columns, from the thin QR
/// of an `m×n` standard Gaussian matrix.
pub fn haar_frame(m: usize, n: usize, seed: u64) -> Result<Matrix> {
    gaussian_frame(m, n, &mut stream_rng(seed, streams::FRAME))
}

/// `U diag(σ) Vᵀ` with independent Haar `U`, `V` of order `n`.
pub fn randsvd(spec: &SpectrumSpec, seed: u64) -> Result<Matrix> {
    spec.validate()?;
    let n = spec.n;
    let u = gaussian_frame(n, n, &mut stream_rng(seed, streams::RANDSVD_LEFT))?;
    let v = gaussian_frame(n, n, &mut stream_rng(seed, streams::RANDSVD_RIGHT))?;
    let sigma = spec.singular_values();
    let us = u.into_vec();
    let mut scaled = us;
    for (col, &s) in scaled.chunks_exact_mut(n).zip(&sigma) {
        col.iter_mut().for_each(|x| *x *= s);
    }
    let us = Matrix::from_col_major(n, n, scaled)?;
    us.matmul(&v.transpose())
}

/// `[R_A; 0]` with `R_A = randsvd(n, κ)`: the orthonormal factor is
/// `[I_n; 0]`, which has the largest possible coherence.
pub fn worst_coherence_stack(m: usize, n: usize, kappa: f64, seed: u64) -> Result<Matrix> {
    if m < n {
        return Err(Error::NotTall { rows: m, cols: n });
    }
    let r_a = randsvd(&SpectrumSpec::geometric(n, kappa), seed)?;
    if m == n {
        return Ok(r_a);
    }
    r_a.vstack(&Matrix::zeros(m - n, n))
}

/// `Q_A R_A` with `Q_A` a Haar `m×n` frame and `R_A = randsvd(n, κ)`. Shares
/// `R_A` with [`worst_coherence_stack`] for the same seed.
pub fn haar_rotated(m: usize, n: usize, kappa: f64, seed: u64) -> Result<Matrix> {
    if m < n {
        return Err(Error::NotTall { rows: m, cols: n });
    }
    let q_a = haar_frame(m, n, seed)?;
    let r_a = randsvd(&SpectrumSpec::geometric(n, kappa), seed)?;
    q_a.matmul(&r_a)
}

/// The two experiment matrix families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    WorstCoherence,
    HaarRotated,
}

impl MatrixKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::WorstCoherence => "worst_coherence",
            MatrixKind::HaarRotated => "haar_rotated",
        }
    }

    pub fn generate(self, m: usize, n: usize, kappa: f64, seed: u64) -> Result<Matrix> {
        match self {
            MatrixKind::WorstCoherence => worst_coherence_stack(m, n, kappa, seed),
            MatrixKind::HaarRotated => haar_rotated(m, n, kappa, seed),
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "worst" | "worst_coherence" => Ok(Self::WorstCoherence),
            "haar" | "haar_rotated" => Ok(Self::HaarRotated),
            other => Err(format!("unknown matrix kind `{other}`")),
        }
    }
}

/// Magic bytes of the binary matrix format.
pub const MATRIX_MAGIC: [u8; 8] = *b"RPCQRMAT";

/// Writes `magic | rows: u64 LE | cols: u64 LE | column-major f64 LE`.
pub fn write_matrix<W: Write>(mut w: W, a: &Matrix) -> io::Result<()> {
    w.write_all(&MATRIX_MAGIC)?;
    w.write_all(&(a.rows() as u64).to_le_bytes())?;
    w.write_all(&(a.cols() as u64).to_le_bytes())?;
    for x in a.as_slice() {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()
}

/// Reads the format written by [`write_matrix`].
pub fn read_matrix<R: Read>(mut r: R) -> io::Result<Matrix> {
    let invalid = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if magic != MATRIX_MAGIC {
        return Err(invalid("bad matrix magic".into()));
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let rows = u64::from_le_bytes(word) as usize;
    r.read_exact(&mut word)?;
    let cols = u64::from_le_bytes(word) as usize;
    let len = rows
        .checked_mul(cols)
        .ok_or_else(|| invalid(format!("{rows}x{cols} overflows")))?;
    let mut data = Vec::with_capacity(len);
    for _ in 0..len {
        r.read_exact(&mut word)?;
        data.push(f64::from_le_bytes(word));
    }
    Matrix::from_col_major(rows, cols, data).map_err(|e| invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::singular_values;
    use crate::metrics::{cond2, ortho_deviation};
    use crate::transforms::coherence;

    #[test]
    fn geometric_spectrum() {
        let s = SpectrumSpec::geometric(3, 100.0).singular_values();
        assert_eq!(s[0], 1.0);
        assert!((s[1] - 0.1).abs() < 1e-16 && (s[2] - 0.01).abs() < 1e-17);
    }

    #[test]
    fn other_modes() {
        let a = SpectrumSpec {
            n: 3,
            kappa: 4.0,
            mode: SpectrumMode::Arithmetic,
        }
        .singular_values();
        assert_eq!(a, vec![1.0, 0.625, 0.25]);
        let o = SpectrumSpec {
            n: 3,
            kappa: 4.0,
            mode: SpectrumMode::OneSmall,
        }
        .singular_values();
        assert_eq!(o, vec![1.0, 1.0, 0.25]);
    }

    #[test]
    fn haar_frame_is_orthonormal_and_deterministic() {
        let q = haar_frame(1000, 50, 3).unwrap();
        assert!(ortho_deviation(&q).unwrap() <= 1e-13);
        assert_eq!(q, haar_frame(1000, 50, 3).unwrap());
        assert_ne!(q, haar_frame(1000, 50, 4).unwrap());
    }

    #[test]
    fn randsvd_unit_condition_is_orthogonal() {
        let a = randsvd(&SpectrumSpec::geometric(6, 1.0), 1).unwrap();
        assert!(ortho_deviation(&a).unwrap() <= 1e-14);
    }

    #[test]
    fn randsvd_round_trip() {
        let spec = SpectrumSpec::geometric(20, 1e6);
        let sv = singular_values(&randsvd(&spec, 5).unwrap()).unwrap();
        for (got, want) in sv.iter().zip(spec.singular_values()) {
            assert!((got - want).abs() <= 1e-8 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn worst_coherence_structure() {
        let a = worst_coherence_stack(40, 5, 1e4, 2).unwrap();
        for j in 0..5 {
            assert!(a.col(j)[5..].iter().all(|&x| x == 0.0));
        }
        let q = householder_qr(&a).unwrap().q;
        assert!((coherence(&q).unwrap() - 1.0).abs() <= 1e-12);
        let k = cond2(&a).unwrap();
        assert!((k / 1e4 - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn haar_rotated_spectrum_and_coherence() {
        let a = haar_rotated(1000, 20, 1e7, 8).unwrap();
        assert!((cond2(&a).unwrap() / 1e7 - 1.0).abs() <= 1e-5);
        let q = householder_qr(&a).unwrap().q;
        assert!(coherence(&q).unwrap() <= 0.3);
        assert_eq!(a, haar_rotated(1000, 20, 1e7, 8).unwrap());
    }

    #[test]
    fn families_share_spectrum() {
        let w = singular_values(&worst_coherence_stack(200, 10, 1e6, 4).unwrap()).unwrap();
        let h = singular_values(&haar_rotated(200, 10, 1e6, 4).unwrap()).unwrap();
        for (x, y) in w.iter().zip(&h) {
            assert!((x - y).abs() <= 1e-10 * x);
        }
    }

    #[test]
    fn binary_round_trip_and_bad_magic() {
        let a = haar_rotated(7, 3, 10.0, 1).unwrap();
        let mut buf = Vec::new();
        write_matrix(&mut buf, &a).unwrap();
        assert_eq!(buf.len(), 24 + 8 * 21);
        assert_eq!(read_matrix(buf.as_slice()).unwrap(), a);
        buf[0] = b'X';
        assert!(read_matrix(buf.as_slice()).is_err());
    }
}
