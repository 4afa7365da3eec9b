//! Dense complex-matrix kernel.
//!
//! Everything downstream (states, channels, bounds) is built on
//! [`ComplexMatrix`], a row-major dense matrix of `Complex64`, plus a handful
//! of free functions: the Hilbert-Schmidt inner product, column-stacking
//! vectorization, and the magnitude-sorting helpers used by the
//! rearrangement-based bounds.

mod eig;
mod text;

pub use eig::{hermitian_eig, psd_sqrt, EigenDecomposition};
pub use text::{format_complex, format_matrix, parse_complex, parse_matrix};

use num_complex::Complex64;

use crate::{Error, Result};

/// Dense row-major complex matrix.
///
/// Construction validates shape and finiteness; entries are immutable after
/// construction apart from the explicit builder methods, so values can be
/// shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(
                "matrix dimensions must be positive".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Parse("matrix entries must be finite".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested row slices, mostly for literals in tests.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.cols + j] = value;
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.entries[i * self.cols + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += aik * other.entries[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols))
            .map(|i| self.entries[i * self.cols + i])
            .sum()
    }

    /// Largest entry modulus; the max-norm used by validation thresholds.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max-norm of A - A^H; zero for exactly Hermitian matrices.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Max-norm of the entrywise difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// A matrix flattened in column-stacking order.
///
/// For a matrix with columns c1, c2, ... the entries are c1 followed by c2
/// and so on, which makes the Kronecker identity |GM> = (I (x) G)|M> hold
/// with the usual Kronecker product convention.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorizedMatrix {
    source_dims: (usize, usize),
    entries: Vec<Complex64>,
}

impl VectorizedMatrix {
    pub fn source_dims(&self) -> (usize, usize) {
        self.source_dims
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Inverse of [`vectorize`]; reproduces the source matrix bit for bit.
    pub fn devectorize(&self) -> ComplexMatrix {
        let (rows, cols) = self.source_dims;
        let mut m = ComplexMatrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.set(i, j, self.entries[j * rows + i]);
            }
        }
        m
    }
}

/// Column-stacks a matrix: [[a, c], [b, d]] becomes (a, b, c, d).
pub fn vectorize(x: &ComplexMatrix) -> VectorizedMatrix {
    let (rows, cols) = (x.rows(), x.cols());
    let mut entries = Vec::with_capacity(rows * cols);
    for j in 0..cols {
        for i in 0..rows {
            entries.push(x.get(i, j));
        }
    }
    VectorizedMatrix {
        source_dims: (rows, cols),
        entries,
    }
}

/// Hilbert-Schmidt inner product tr(X^H Y) = sum conj(x_st) y_st.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
    x.same_shape(y)?;
    Ok(x.entries
        .iter()
        .zip(&y.entries)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// An explicit permutation of 0..n, validated to be a bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &k in &mapping {
            if k >= n || seen[k] {
                return Err(Error::InvalidPermutation { len: n });
            }
            seen[k] = true;
        }
        Ok(Self { mapping })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// Stable argsort of the moduli in non-increasing order: position k of
    /// the result names the source index holding the k-th largest modulus,
    /// ties keeping their original relative order.
    pub fn descending_by_modulus(v: &[Complex64]) -> Self {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[b].norm().partial_cmp(&v[a].norm()).unwrap());
        Self { mapping: idx }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    #[inline]
    pub fn apply(&self, k: usize) -> usize {
        self.mapping[k]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.mapping.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Reorders the entries so moduli are non-increasing, stably.
pub fn sort_abs_descending(v: &VectorizedMatrix) -> VectorizedMatrix {
    let perm = Permutation::descending_by_modulus(&v.entries);
    let entries = perm.mapping().iter().map(|&k| v.entries[k]).collect();
    VectorizedMatrix {
        source_dims: v.source_dims,
        entries,
    }
}

/// Sum of |a_k| * |b_{perm(k)}| over all positions.
pub fn abs_pair_sum(a: &VectorizedMatrix, b: &VectorizedMatrix, perm: &Permutation) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "vector lengths {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if perm.len() != a.len() {
        return Err(Error::InvalidPermutation { len: perm.len() });
    }
    Ok(a.entries
        .iter()
        .enumerate()
        .map(|(k, z)| z.norm() * b.entries[perm.apply(k)].norm())
        .sum())
}
