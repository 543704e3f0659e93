//! Benchmark inputs shared by the criterion targets.

use rpcholqr::genmat::{haar_rotated, worst_coherence_stack};
use rpcholqr::Matrix;

/// Tall-skinny shapes `(m, n)` used by the factorization benchmarks.
pub const SHAPES: [(usize, usize); 3] = [(1000, 50), (2000, 100), (4000, 100)];

/// Numerically singular input with worst-case coherence.
pub fn singular_input(m: usize, n: usize) -> Matrix {
    worst_coherence_stack(m, n, 1e15, 1).expect("valid shape")
}

/// Moderately conditioned input that Cholesky-QR2 can handle.
pub fn moderate_input(m: usize, n: usize) -> Matrix {
    haar_rotated(m, n, 1e6, 1).expect("valid shape")
}
