use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::math;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// `|u⟩⟨v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// `self† · v`.
    pub fn adjoint_mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.rows != v.len() {
            return Err(Error::DimensionMismatch {
                context: "adjoint matrix-vector product",
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![ZERO; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == ZERO {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "matrix sum", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, "matrix difference", |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        context: &'static str,
        f: impl Fn(C64, C64) -> C64,
    ) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                context,
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        math::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        Self::from_fn(rows, cols, |i, j| {
            self[(i / rhs.rows, j / rhs.cols)] * rhs[(i % rhs.rows, j % rhs.cols)]
        })
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product of two vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|&y| x * y));
    }
    out
}

/// Kronecker product of two matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner_product(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vector_norm(v: &[C64]) -> f64 {
    math::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Square complex matrix equal to its conjugate transpose.
///
/// Construction symmetrizes the input as `(A + A†)/2`, so the diagonal is
/// exactly real and `a_ij = conj(a_ji)` holds bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                context: "Hermitian matrix (square)",
                expected: m.rows,
                found: m.cols,
            });
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes a matrix that is already known to be square.
    pub(crate) fn symmetrize(mut m: ComplexMatrix) -> Self {
        let n = m.rows;
        for i in 0..n {
            m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self { inner: m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(dim),
        }
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::identity(dim).scale(1.0 / dim as f64)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self {
            inner: ComplexMatrix::from_real_diagonal(diag),
        }
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn projector(psi: &[C64]) -> Self {
        Self::symmetrize(ComplexMatrix::outer(psi, psi))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.scale(C64::new(s, 0.0)),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            inner: self.inner.add(&rhs.inner)?,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            inner: self.inner.sub(&rhs.inner)?,
        })
    }

    /// `self += s · rhs` in place; dimensions must agree.
    pub(crate) fn add_scaled_assign(&mut self, s: f64, rhs: &Self) {
        debug_assert_eq!(self.dim(), rhs.dim());
        for (a, &b) in self.inner.data.iter_mut().zip(&rhs.inner.data) {
            *a += b * s;
        }
    }

    /// `self += s · I` in place.
    pub(crate) fn add_identity_assign(&mut self, s: f64) {
        for i in 0..self.dim() {
            self.inner[(i, i)].re += s;
        }
    }

    /// `self += s · |v⟩⟨v|` in place.
    pub(crate) fn add_outer_assign(&mut self, s: f64, v: &[C64]) {
        let n = self.dim();
        debug_assert_eq!(n, v.len());
        for i in 0..n {
            let vi = v[i] * s;
            if vi == ZERO {
                continue;
            }
            let row = &mut self.inner.data[i * n..(i + 1) * n];
            for (a, &vj) in row.iter_mut().zip(v) {
                *a += vi * vj.conj();
            }
        }
    }

    /// `Re tr(self · rhs)`, exact for Hermitian arguments.
    pub fn trace_product(&self, rhs: &Self) -> f64 {
        self.inner
            .data
            .iter()
            .zip(&rhs.inner.data)
            .map(|(a, b)| a.re * b.re + a.im * b.im)
            .sum()
    }

    /// `⟨ψ|self|ψ⟩`.
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            let row: C64 = self.inner.row(i).iter().zip(psi).map(|(&a, &b)| a * b).sum();
            acc += (psi[i].conj() * row).re;
        }
        acc
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        self.inner.mul_vec(v)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        Self {
            inner: self.inner.kron(&rhs.inner),
        }
    }

    /// Entries of the diagonal (real parts).
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).collect()
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.inner[idx]
    }
}
