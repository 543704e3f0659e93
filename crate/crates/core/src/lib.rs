//! Randomized preconditioned Cholesky-QR (rpCholesky-QR) for thin QR
//! factorizations of tall-skinny full-column-rank matrices.
//!
//! The crate provides the factorization algorithms ([`algorithms`]), the
//! dense kernels they are built from ([`kernels`]), the randomized
//! smoothing-and-sampling preconditioner ([`transforms`]), closed-form
//! perturbation bounds ([`bounds`]), seeded test-matrix generators
//! ([`genmat`]) and accuracy metrics ([`metrics`]).

pub mod algorithms;
pub mod bounds;
pub mod error;
pub mod factors;
pub mod genmat;
pub mod kernels;
pub mod metrics;
pub mod rng;
pub mod transforms;

pub use algorithms::{PreconditionerInfo, RpCholeskyQr};
pub use error::{Breakdown, Error, Result};
pub use factors::{Method, QrFactors};
pub use genmat::MatrixKind;
pub use kernels::{Matrix, SymmetricMatrix, UpperTriangular};
pub use metrics::TrialRecord;

/// Machine epsilon of IEEE binary64, `2^-52`, used as the rounding unit in
/// every bound and estimate.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON;
