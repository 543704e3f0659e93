use super::matrix::{norm2, Matrix, UpperTriangular};
use crate::error::{Error, Result};
use crate::factors::{Method, QrFactors};

/// Compact Householder factorization: reflectors below the diagonal of
/// `work`, `R` on and above it.
struct Reflectors {
    work: Vec<f64>,
    tau: Vec<f64>,
    rows: usize,
    cols: usize,
}

fn factor(a: &Matrix) -> Result<Reflectors> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::NotTall { rows: m, cols: n });
    }
    let mut w = a.as_slice().to_vec();
    let mut tau = vec![0.0; n];
    for k in 0..n {
        let (head, tail) = w.split_at_mut((k + 1) * m);
        let col = &mut head[k * m + k..];
        let alpha = col[0];
        let xnorm = norm2(&col[1..]);
        if xnorm == 0.0 {
            continue;
        }
        let beta = -alpha.hypot(xnorm).copysign(alpha);
        tau[k] = (beta - alpha) / beta;
        let inv = 1.0 / (alpha - beta);
        for x in &mut col[1..] {
            *x *= inv;
        }
        col[0] = beta;
        // Apply (I - tau v vᵀ) to the trailing columns, v = [1; col[1..]].
        let v = &col[1..];
        for j in 0..n - k - 1 {
            let c = &mut tail[j * m + k..(j + 1) * m];
            let s = c[0] + c[1..].iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
            let f = tau[k] * s;
            c[0] -= f;
            for (x, &vi) in c[1..].iter_mut().zip(v) {
                *x -= f * vi;
            }
        }
    }
    Ok(Reflectors {
        work: w,
        tau,
        rows: m,
        cols: n,
    })
}

impl Reflectors {
    /// `R` with the sign of each row flipped so that the diagonal is
    /// nonnegative; `signs[k]` records the flip.
    fn r_normalized(&self) -> (UpperTriangular, Vec<f64>) {
        let (m, n) = (self.rows, self.cols);
        let mut r = vec![0.0; n * n];
        let mut signs = vec![1.0; n];
        for (k, s) in signs.iter_mut().enumerate() {
            if self.work[k + k * m] < 0.0 {
                *s = -1.0;
            }
        }
        for j in 0..n {
            for i in 0..=j {
                r[i + j * n] = signs[i] * self.work[i + j * m];
            }
        }
        let r = Matrix::from_parts_unchecked(n, n, r);
        (
            UpperTriangular::new(r).expect("strict lower part is zero"),
            signs,
        )
    }

    /// Thin `Q = H_0 ⋯ H_{n-1} [I_n; 0]`, columns scaled by `signs`.
    fn thin_q(&self, signs: &[f64]) -> Matrix {
        let (m, n) = (self.rows, self.cols);
        let mut q = Matrix::eye(m, n).into_vec();
        for k in (0..n).rev() {
            let tau = self.tau[k];
            if tau == 0.0 {
                continue;
            }
            let v = &self.work[k * m + k + 1..(k + 1) * m];
            for j in k..n {
                let c = &mut q[j * m + k..(j + 1) * m];
                let s = c[0] + c[1..].iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
                let f = tau * s;
                c[0] -= f;
                for (x, &vi) in c[1..].iter_mut().zip(v) {
                    *x -= f * vi;
                }
            }
        }
        for (j, &s) in signs.iter().enumerate() {
            if s < 0.0 {
                for x in &mut q[j * m..(j + 1) * m] {
                    *x = -*x;
                }
            }
        }
        Matrix::from_parts_unchecked(m, n, q)
    }
}

/// Thin Householder QR with nonnegative diagonal in `R`.
///
/// Rank deficiency is not an error; it shows up as a tiny diagonal entry.
pub fn householder_qr(a: &Matrix) -> Result<QrFactors> {
    let refl = factor(a)?;
    let (r, signs) = refl.r_normalized();
    let q = refl.thin_q(&signs);
    Ok(QrFactors {
        q,
        r,
        method: Method::Householder,
    })
}

/// `R` factor only, with the same sign normalization as [`householder_qr`].
pub fn householder_r(a: &Matrix) -> Result<UpperTriangular> {
    Ok(factor(a)?.r_normalized().0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::test_util::{random_matrix, spectral_norm_exact};

    #[test]
    fn identity_stack_is_fixed_point() {
        let a = Matrix::eye(5, 3);
        let f = householder_qr(&a).unwrap();
        assert_eq!(f.q, a);
        assert_eq!(f.r.as_matrix(), &Matrix::identity(3));
    }

    #[test]
    fn three_four_five() {
        let a = Matrix::from_rows(&[[3.0], [4.0]]).unwrap();
        let f = householder_qr(&a).unwrap();
        assert!((f.q[(0, 0)] - 0.6).abs() < 1e-15);
        assert!((f.q[(1, 0)] - 0.8).abs() < 1e-15);
        assert_eq!(f.r.get(0, 0), 5.0);
    }

    #[test]
    fn random_orthogonality_and_residual() {
        let a = random_matrix(200, 20, 5);
        let f = householder_qr(&a).unwrap();
        let qtq =
            f.q.t_matmul(&f.q)
                .unwrap()
                .sub(&Matrix::identity(20))
                .unwrap();
        let res = f.product().unwrap().sub(&a).unwrap();
        assert!(spectral_norm_exact(&qtq) <= 1e-13);
        assert!(spectral_norm_exact(&res) / spectral_norm_exact(&a) <= 1e-13);
        assert!(f.r.diagonal().iter().all(|&d| d >= 0.0));
    }

    #[test]
    fn q_less_matches_full() {
        let a = random_matrix(30, 4, 9);
        assert_eq!(householder_r(&a).unwrap(), householder_qr(&a).unwrap().r);
    }

    #[test]
    fn zero_column_is_not_an_error() {
        let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]).unwrap();
        let f = householder_qr(&a).unwrap();
        assert_eq!(f.r.get(1, 1), 0.0);
    }

    #[test]
    fn wide_input_rejected() {
        assert!(matches!(
            householder_qr(&Matrix::zeros(2, 3)),
            Err(Error::NotTall { .. })
        ));
    }
}
