//! Seed derivation.
//!
//! Every seed is `derive_seed(parts)` from the core crate: starting from a
//! fixed constant, each part is passed through the SplitMix64 finalizer and
//! folded in with `acc = mix64(acc ^ mix64(part))`. The hash depends only on
//! the integer parts, so seeds are stable across platforms and releases.

use rpcholqr::rng::derive_seed;
use rpcholqr::Method;

/// Tag separating matrix seeds from trial seeds.
const MATRIX_TAG: u64 = 0x4d41_5452_4958;
/// Stands in for the trial index when one matrix serves all trials.
const SHARED: u64 = u64::MAX;

/// Stable integer code of a method, used as a hash part.
pub fn method_code(method: Method) -> u64 {
    match method {
        Method::Householder => 0,
        Method::Basic => 1,
        Method::CholeskyQr2 => 2,
        Method::Preconditioned => 3,
        Method::RpCholesky => 4,
    }
}

/// Seed of trial `trial` at sweep point `point` for `method`.
pub fn trial_seed(master: u64, point: usize, trial: usize, method: Method) -> u64 {
    derive_seed(&[master, point as u64, trial as u64, method_code(method)])
}

/// Seed of the `attempt`-th reseed after a rank-deficient sample.
pub fn retry_seed(seed: u64, attempt: u32) -> u64 {
    derive_seed(&[seed, u64::from(attempt)])
}

/// Seed of the test matrix with `n` columns. With `trial = None` the matrix
/// is shared by every trial and every method with that column count.
pub fn matrix_seed(master: u64, n: usize, trial: Option<usize>) -> u64 {
    derive_seed(&[
        master,
        MATRIX_TAG,
        n as u64,
        trial.map_or(SHARED, |t| t as u64),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn seeds_are_distinct_across_points_trials_methods() {
        let mut seen = HashSet::new();
        for point in 0..20 {
            for trial in 0..50 {
                for m in [
                    Method::Basic,
                    Method::CholeskyQr2,
                    Method::Preconditioned,
                    Method::RpCholesky,
                ] {
                    assert!(seen.insert(trial_seed(7, point, trial, m)));
                }
            }
        }
    }

    #[test]
    fn seeds_are_stable() {
        // Pinned so that published CSVs stay reproducible; the values were
        // computed independently from the documented hash.
        assert_eq!(
            trial_seed(0, 0, 0, Method::RpCholesky),
            0xc175_6447_cb49_d871
        );
        assert_eq!(trial_seed(1, 2, 3, Method::Basic), 0x94e0_4aa6_85d2_43c0);
        assert_ne!(
            trial_seed(0, 0, 0, Method::RpCholesky),
            trial_seed(1, 0, 0, Method::RpCholesky)
        );
        assert_ne!(matrix_seed(0, 10, None), matrix_seed(0, 10, Some(0)));
        assert_ne!(retry_seed(5, 1), retry_seed(5, 2));
    }
}
