use super::matrix::{dot, Matrix, SymmetricMatrix, UpperTriangular};
use crate::error::{Breakdown, Error, Result};

/// Gram matrix `AᵀA`, symmetrized so that `G[i,j] == G[j,i]` bit-exactly.
///
/// Fails with `NonFinite` only if the products overflow.
pub fn gram(a: &Matrix) -> Result<SymmetricMatrix> {
    let n = a.cols();
    let mut g = vec![0.0; n * n];
    for j in 0..n {
        for i in 0..=j {
            let s = dot(a.col(i), a.col(j));
            g[i + j * n] = s;
            g[j + i * n] = s;
        }
    }
    // A column dot product is the same sum in either order, so mirroring the
    // upper part equals (AᵀA + (AᵀA)ᵀ)/2 exactly.
    SymmetricMatrix::new(Matrix::from_computed(n, n, g)?)
}

/// Upper Cholesky factor `R` with `RᵀR = G` and positive diagonal.
///
/// Right-looking and unblocked. A pivot that is not strictly positive and
/// finite aborts with [`Breakdown`]; `stage` is reported as 1.
pub fn cholesky(g: &SymmetricMatrix) -> std::result::Result<UpperTriangular, Breakdown> {
    let n = g.order();
    // Work on the upper triangle in place.
    let mut w = g.as_matrix().as_slice().to_vec();
    for k in 0..n {
        let pivot = w[k + k * n];
        if !(pivot > 0.0 && pivot.is_finite()) {
            return Err(Breakdown {
                stage: 1,
                pivot_index: k,
                pivot_value: pivot,
            });
        }
        let rkk = pivot.sqrt();
        w[k + k * n] = rkk;
        for j in k + 1..n {
            w[k + j * n] /= rkk;
        }
        // Trailing update of the upper triangle: W[i,j] -= R[k,i] R[k,j].
        for j in k + 1..n {
            let rkj = w[k + j * n];
            if rkj == 0.0 {
                continue;
            }
            for i in k + 1..=j {
                w[i + j * n] -= w[k + i * n] * rkj;
            }
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            w[i + j * n] = 0.0;
        }
    }
    // Every pivot was positive and finite, and off-diagonal entries are
    // finite multiples of finite values.
    let m = Matrix::from_computed(n, n, w).map_err(|_| Breakdown {
        stage: 1,
        pivot_index: n.saturating_sub(1),
        pivot_value: f64::NAN,
    })?;
    Ok(UpperTriangular::new(m).expect("lower part was zeroed"))
}

/// Solves `X R = A` for `X`.
///
/// Each row of `X` is a forward substitution against `Rᵀ`; the loops run
/// column by column so the column-major storage is walked contiguously.
pub fn tri_solve_right(a: &Matrix, r: &UpperTriangular) -> Result<Matrix> {
    let n = r.order();
    if a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} against triangular factor of order {}",
            a.rows(),
            a.cols(),
            n
        )));
    }
    check_nonsingular(r)?;
    let m = a.rows();
    let mut x = a.as_slice().to_vec();
    for j in 0..n {
        let (done, rest) = x.split_at_mut(j * m);
        let xj = &mut rest[..m];
        for k in 0..j {
            let rkj = r.get(k, j);
            if rkj == 0.0 {
                continue;
            }
            for (d, &s) in xj.iter_mut().zip(&done[k * m..(k + 1) * m]) {
                *d -= s * rkj;
            }
        }
        let rjj = r.get(j, j);
        for d in xj.iter_mut() {
            *d /= rjj;
        }
    }
    Matrix::from_computed(m, n, x)
}

pub(crate) fn check_nonsingular(r: &UpperTriangular) -> Result<()> {
    for i in 0..r.order() {
        let d = r.get(i, i);
        if d == 0.0 || !d.is_finite() {
            return Err(Error::SingularTriangular { index: i, value: d });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::test_util::random_matrix;

    #[test]
    fn gram_identity_stack() {
        let a = Matrix::eye(3, 2);
        assert_eq!(gram(&a).unwrap().as_matrix(), &Matrix::identity(2));
    }

    #[test]
    fn gram_of_ones_column() {
        let a = Matrix::from_col_major(3, 1, vec![1.0; 3]).unwrap();
        assert_eq!(gram(&a).unwrap().get(0, 0), 3.0);
    }

    #[test]
    fn gram_matches_triple_loop() {
        let a = random_matrix(50, 7, 11);
        let g = gram(&a).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..7 {
            for j in 0..7 {
                let mut s = 0.0;
                for k in 0..50 {
                    s += a[(k, i)] * a[(k, j)];
                }
                worst = worst.max((g.get(i, j) - s).abs() / s.abs().max(1.0));
            }
        }
        assert!(worst <= 1e-14, "{worst}");
    }

    #[test]
    fn cholesky_two_by_two() {
        let g =
            SymmetricMatrix::new(Matrix::from_rows(&[[4.0, 2.0], [2.0, 5.0]]).unwrap()).unwrap();
        let r = cholesky(&g).unwrap();
        assert_eq!(
            r.as_matrix(),
            &Matrix::from_rows(&[[2.0, 1.0], [0.0, 2.0]]).unwrap()
        );
    }

    #[test]
    fn cholesky_identity() {
        let g = SymmetricMatrix::new(Matrix::identity(5)).unwrap();
        assert_eq!(cholesky(&g).unwrap().as_matrix(), &Matrix::identity(5));
    }

    #[test]
    fn cholesky_indefinite_breaks_down_at_second_pivot() {
        let g =
            SymmetricMatrix::new(Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap()).unwrap();
        let b = cholesky(&g).unwrap_err();
        assert_eq!(b.pivot_index, 1);
        assert_eq!(b.pivot_value, -3.0);
    }

    #[test]
    fn tri_solve_reconstructs_identity() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [0.0, 2.0], [0.0, 0.0]]).unwrap();
        let r =
            UpperTriangular::new(Matrix::from_rows(&[[2.0, 1.0], [0.0, 2.0]]).unwrap()).unwrap();
        let x = tri_solve_right(&a, &r).unwrap();
        assert_eq!(x, Matrix::eye(3, 2));
        let x = tri_solve_right(r.as_matrix(), &r).unwrap();
        assert_eq!(x, Matrix::identity(2));
    }

    #[test]
    fn tri_solve_small_residual() {
        let a = random_matrix(40, 6, 3);
        let r = cholesky(&gram(&a).unwrap()).unwrap();
        let x = tri_solve_right(&a, &r).unwrap();
        let res = x.matmul(r.as_matrix()).unwrap().sub(&a).unwrap();
        let rel = crate::kernels::singular_values(&res).unwrap()[0]
            / crate::kernels::singular_values(&a).unwrap()[0];
        assert!(rel <= 1e-14, "{rel}");
    }

    #[test]
    fn tri_solve_rejects_zero_diagonal() {
        let a = Matrix::identity(2);
        let r =
            UpperTriangular::new(Matrix::from_rows(&[[1.0, 1.0], [0.0, 0.0]]).unwrap()).unwrap();
        assert!(matches!(
            tri_solve_right(&a, &r),
            Err(Error::SingularTriangular { index: 1, .. })
        ));
    }
}
