use std::fmt;
use std::ops::Index;

use crate::error::{Error, Result};

/// Dense column-major `f64` matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from column-major data, rejecting empty shapes and
    /// non-finite entries.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k % rows,
                col: k / rows,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut data = vec![0.0; m * n];
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.as_ref().iter().enumerate() {
                data[i + j * m] = x;
            }
        }
        Self::from_col_major(m, n, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::eye(n, n)
    }

    /// `[I_n; 0]` for `rows >= cols`, or the leading part of the identity otherwise.
    pub fn eye(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m.data[i + i * rows] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, &x) in d.iter().enumerate() {
            data[i + i * n] = x;
        }
        Self::from_col_major(n, n, data)
    }

    /// Constructor for results of internal arithmetic that must already be
    /// finite; returns `NonFinite` if overflow produced inf or NaN.
    pub(crate) fn from_computed(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(data.len(), rows * cols);
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: k % rows,
                col: k / rows,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Skips the finiteness scan. Callers guarantee every entry is finite.
    pub(crate) fn from_parts_unchecked(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|x| x.is_finite()));
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.rows]
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Matrix {
        let (m, n) = self.shape();
        let mut out = vec![0.0; m * n];
        for j in 0..n {
            for i in 0..m {
                out[j + i * n] = self.data[i + j * m];
            }
        }
        Matrix::from_parts_unchecked(n, m, out)
    }

    /// `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (m, p) = (self.rows, other.cols);
        let mut out = vec![0.0; m * p];
        for j in 0..p {
            let dst = &mut out[j * m..(j + 1) * m];
            for k in 0..self.cols {
                let b = other.get(k, j);
                if b == 0.0 {
                    continue;
                }
                for (d, &a) in dst.iter_mut().zip(self.col(k)) {
                    *d += a * b;
                }
            }
        }
        Matrix::from_computed(m, p, out)
    }

    /// `selfᵀ * other`, computed as column dot products.
    pub fn t_matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "({}x{})ᵀ times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, p) = (self.cols, other.cols);
        let mut out = vec![0.0; n * p];
        for j in 0..p {
            for i in 0..n {
                out[i + j * n] = dot(self.col(i), other.col(j));
            }
        }
        Matrix::from_computed(n, p, out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Matrix::from_computed(self.rows, self.cols, data)
    }

    pub fn scaled(&self, alpha: f64) -> Result<Matrix> {
        Matrix::from_computed(
            self.rows,
            self.cols,
            self.data.iter().map(|x| alpha * x).collect(),
        )
    }

    /// Scales row `i` by `d[i]`, i.e. `diag(d) * self`.
    pub fn scale_rows(&self, d: &[f64]) -> Result<Matrix> {
        if d.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{} row scales for {} rows",
                d.len(),
                self.rows
            )));
        }
        let mut out = self.data.clone();
        for col in out.chunks_exact_mut(self.rows) {
            for (x, &s) in col.iter_mut().zip(d) {
                *x *= s;
            }
        }
        Matrix::from_computed(self.rows, self.cols, out)
    }

    /// Rows `indices` of `self` in the given order, each multiplied by `scale`.
    pub fn select_rows(&self, indices: &[usize], scale: f64) -> Result<Matrix> {
        if indices.is_empty() {
            return Err(Error::EmptyMatrix {
                rows: 0,
                cols: self.cols,
            });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.rows) {
            return Err(Error::DimensionMismatch(format!(
                "row index {bad} out of range for {} rows",
                self.rows
            )));
        }
        let c = indices.len();
        let mut out = vec![0.0; c * self.cols];
        for j in 0..self.cols {
            let src = self.col(j);
            for (d, &i) in out[j * c..(j + 1) * c].iter_mut().zip(indices) {
                *d = scale * src[i];
            }
        }
        Matrix::from_computed(c, self.cols, out)
    }

    /// Leading `rows x cols` block.
    pub fn top_left(&self, rows: usize, cols: usize) -> Matrix {
        assert!(rows <= self.rows && cols <= self.cols);
        let mut out = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            out.extend_from_slice(&self.col(j)[..rows]);
        }
        Matrix::from_parts_unchecked(rows, cols, out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let rows = self.rows + other.rows;
        let mut out = Vec::with_capacity(rows * self.cols);
        for j in 0..self.cols {
            out.extend_from_slice(self.col(j));
            out.extend_from_slice(other.col(j));
        }
        Ok(Matrix::from_parts_unchecked(rows, self.cols, out))
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i + j * self.rows]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                write!(f, "{:>12.5e} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Square upper triangular matrix; entries below the diagonal are exactly zero.
#[derive(Clone, PartialEq, Debug)]
pub struct UpperTriangular(Matrix);

impl UpperTriangular {
    pub fn new(m: Matrix) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c {
            return Err(Error::DimensionMismatch(format!(
                "triangular factor must be square, got {r}x{c}"
            )));
        }
        for j in 0..c {
            for i in j + 1..r {
                if m.get(i, j) != 0.0 {
                    return Err(Error::NotUpperTriangular { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Zeroes the strictly lower part of a square matrix.
    pub fn from_upper_part(mut m: Matrix) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c {
            return Err(Error::DimensionMismatch(format!(
                "triangular factor must be square, got {r}x{c}"
            )));
        }
        for j in 0..c {
            for i in j + 1..r {
                m.data[i + j * r] = 0.0;
            }
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(Matrix::identity(n))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order()).map(|i| self.get(i, i)).collect()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// `self * other`, exploiting that both factors are upper triangular.
    pub fn mul_upper(&self, other: &UpperTriangular) -> Result<UpperTriangular> {
        let n = self.order();
        if other.order() != n {
            return Err(Error::DimensionMismatch(format!(
                "triangular orders {} and {}",
                n,
                other.order()
            )));
        }
        let mut out = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..=j {
                let mut s = 0.0;
                for k in i..=j {
                    s += self.get(i, k) * other.get(k, j);
                }
                out[i + j * n] = s;
            }
        }
        Ok(UpperTriangular(Matrix::from_computed(n, n, out)?))
    }

    pub fn scaled(&self, alpha: f64) -> Result<UpperTriangular> {
        Ok(UpperTriangular(self.0.scaled(alpha)?))
    }
}

/// Square matrix stored with exact symmetry.
#[derive(Clone, PartialEq, Debug)]
pub struct SymmetricMatrix(Matrix);

impl SymmetricMatrix {
    /// Accepts only matrices that are already bit-exactly symmetric.
    pub fn new(m: Matrix) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix must be square, got {r}x{c}"
            )));
        }
        for j in 0..c {
            for i in j + 1..r {
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self(m))
    }

    /// Replaces `m` by `(m + mᵀ)/2`.
    pub fn symmetrize(mut m: Matrix) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c {
            return Err(Error::DimensionMismatch(format!(
                "symmetric matrix must be square, got {r}x{c}"
            )));
        }
        for j in 0..c {
            for i in j + 1..r {
                let s = 0.5 * (m.data[i + j * r] + m.data[j + i * r]);
                m.data[i + j * r] = s;
                m.data[j + i * r] = s;
            }
        }
        Ok(Self(m))
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm with scaling so that tiny or huge entries do not
/// underflow or overflow.
pub(crate) fn norm2(x: &[f64]) -> f64 {
    let scale = x.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().map(|v| (v / scale) * (v / scale)).sum();
    scale * s.sqrt()
}
