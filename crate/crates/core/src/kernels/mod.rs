//! Dense linear-algebra primitives: matrix types, Gram/Cholesky/triangular
//! solves, Householder QR, Jacobi eigen- and singular values, and a power
//! iteration for the two-norm.

mod cholesky;
mod householder;
mod jacobi;
mod matrix;
mod norm;

pub(crate) use cholesky::check_nonsingular;
pub use cholesky::{cholesky, gram, tri_solve_right};
pub use householder::{householder_qr, householder_r};
pub use jacobi::{singular_values, sym_eigenvalues};
#[cfg(test)]
pub(crate) use matrix::norm2;
pub use matrix::{Matrix, SymmetricMatrix, UpperTriangular};
pub use norm::spectral_norm;
