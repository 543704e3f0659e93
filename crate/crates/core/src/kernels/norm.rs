use rand_distr::{Distribution, StandardNormal};

use super::matrix::{norm2, Matrix};
use crate::rng::{stream_rng, streams};

const POWER_REL_TOL: f64 = 1e-6;
const POWER_MAX_ITERS: usize = 500;
const POWER_SEED: u64 = 0x05EC_74A1_0A5D;

/// Largest singular value by power iteration on `AᵀA`.
///
/// Starts from a fixed-seed Gaussian vector and stops when successive
/// estimates agree to `1e-6` relative (or after 500 iterations), then
/// returns the Rayleigh quotient `‖A x‖` of the last unit iterate.
pub fn spectral_norm(a: &Matrix) -> f64 {
    let (m, n) = a.shape();
    if a.max_abs() == 0.0 {
        return 0.0;
    }
    let mut rng = stream_rng(POWER_SEED, streams::POWER_START);
    let mut x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&mut x);

    let mut y = vec![0.0; m];
    let mut prev = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        apply(a, &x, &mut y);
        let sigma = norm2(&y);
        let mut z: Vec<f64> = (0..n).map(|j| super::matrix::dot(a.col(j), &y)).collect();
        if norm2(&z) == 0.0 {
            // The start vector landed in the null space of A; restart along a
            // column of largest norm.
            let j = (0..n)
                .max_by(|&i, &k| norm2(a.col(i)).total_cmp(&norm2(a.col(k))))
                .unwrap_or(0);
            z = vec![0.0; n];
            z[j] = 1.0;
        }
        normalize(&mut z);
        x = z;
        if (sigma - prev).abs() <= POWER_REL_TOL * sigma {
            break;
        }
        prev = sigma;
    }
    apply(a, &x, &mut y);
    norm2(&y)
}

fn apply(a: &Matrix, x: &[f64], y: &mut [f64]) {
    y.iter_mut().for_each(|v| *v = 0.0);
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        for (v, &aij) in y.iter_mut().zip(a.col(j)) {
            *v += aij * xj;
        }
    }
}

fn normalize(x: &mut [f64]) {
    let s = norm2(x);
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::test_util::random_matrix;

    #[test]
    fn zero_matrix() {
        assert_eq!(spectral_norm(&Matrix::zeros(4, 3)), 0.0);
    }

    #[test]
    fn diagonal() {
        let a = Matrix::from_diag(&[2.0, -7.0]).unwrap();
        assert!((spectral_norm(&a) - 7.0).abs() <= 7.0 * 1e-6);
    }

    #[test]
    fn matches_singular_values() {
        let a = random_matrix(100, 10, 8);
        let s1 = crate::kernels::singular_values(&a).unwrap()[0];
        let est = spectral_norm(&a);
        assert!((est - s1).abs() <= 1e-5 * s1, "{est} vs {s1}");
    }

    #[test]
    fn rank_one_in_unlucky_direction() {
        // Only the last column is nonzero.
        let mut rows = vec![[0.0, 0.0, 0.0]; 4];
        rows[2][2] = 3.0;
        let a = Matrix::from_rows(&rows).unwrap();
        assert!((spectral_norm(&a) - 3.0).abs() < 1e-12);
    }
}
