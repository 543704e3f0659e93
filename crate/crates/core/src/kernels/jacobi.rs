//! Jacobi methods for small dense problems: two-sided cyclic Jacobi for
//! symmetric eigenvalues and one-sided (Hestenes) Jacobi for singular values.

use super::householder::householder_r;
use super::matrix::{dot, Matrix, SymmetricMatrix};
use crate::error::{Error, Result};

const EIG_MAX_SWEEPS: usize = 30;
const EIG_TOL: f64 = 1e-15;
const SVD_MAX_SWEEPS: usize = 60;
const SVD_TOL: f64 = 1e-15;

/// Eigenvalues of a symmetric matrix, in descending order.
///
/// Cyclic Jacobi; stops once the off-diagonal Frobenius mass is at most
/// `1e-15 * ‖S‖_F`, failing with `NoConvergence` after 30 sweeps.
pub fn sym_eigenvalues(s: &SymmetricMatrix) -> Result<Vec<f64>> {
    let n = s.order();
    let mut a = s.as_matrix().as_slice().to_vec();
    let fro = s.as_matrix().frobenius_norm();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let off = |a: &[f64]| -> f64 {
        let mut acc = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    let x = a[i + j * n] / fro;
                    acc += x * x;
                }
            }
        }
        fro * acc.sqrt()
    };

    let mut converged = off(&a) <= EIG_TOL * fro;
    let mut sweeps = 0;
    while !converged {
        if sweeps == EIG_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p + q * n];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p + p * n];
                let aqq = a[q + q * n];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + theta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let sn = t * c;
                a[p + p * n] = app - t * apq;
                a[q + q * n] = aqq + t * apq;
                a[p + q * n] = 0.0;
                a[q + p * n] = 0.0;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r + p * n];
                    let arq = a[r + q * n];
                    let new_p = c * arp - sn * arq;
                    let new_q = sn * arp + c * arq;
                    a[r + p * n] = new_p;
                    a[p + r * n] = new_p;
                    a[r + q * n] = new_q;
                    a[q + r * n] = new_q;
                }
            }
        }
        converged = off(&a) <= EIG_TOL * fro;
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i + i * n]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Singular values of a tall matrix, in descending order.
///
/// Householder QR first, then one-sided Jacobi on `Rᵀ`. The Gram matrix is
/// never formed, so small singular values keep their relative accuracy.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let r = householder_r(a)?;
    let mut sv = one_sided_jacobi(r.as_matrix().transpose())?;
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// Column norms of `b·V` after orthogonalizing the columns of the square
/// matrix `b` with plane rotations.
fn one_sided_jacobi(b: Matrix) -> Result<Vec<f64>> {
    let n = b.cols();
    let m = b.rows();
    let mut u = b.into_vec();
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (lo, hi) = u.split_at_mut(q * m);
                let up = &mut lo[p * m..(p + 1) * m];
                let uq = &mut hi[..m];
                let alpha = dot(up, up);
                let beta = dot(uq, uq);
                let gamma = dot(up, uq);
                if gamma == 0.0 || gamma.abs() <= SVD_TOL * (alpha.sqrt() * beta.sqrt()) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + zeta.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = c * t;
                for (x, y) in up.iter_mut().zip(uq.iter_mut()) {
                    let xp = *x;
                    let yq = *y;
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps == SVD_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
    }
    Ok(u.chunks_exact(m).map(super::matrix::norm2).collect())
}
