use std::ops::{Index, IndexMut};

use super::{Complex, Real};
use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, bits: usize) -> Self {
        Matrix { rows, cols, data: vec![Complex::zero(bits); rows * cols] }
    }

    pub fn identity(n: usize, bits: usize) -> Self {
        let mut m = Self::zeros(n, n, bits);
        for i in 0..n {
            m[(i, i)] = Complex::one(bits);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::contract("ragged rows"));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(d: &[Complex]) -> Self {
        let n = d.len();
        let bits = d.first().map_or(64, Complex::bits);
        let mut m = Self::zeros(n, n, bits);
        for (i, v) in d.iter().enumerate() {
            m[(i, i)] = v.clone();
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

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.with_bits(bits)).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::contract(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let bits = self.bits().max(rhs.bits());
        Ok(Matrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Complex::zero(bits);
            for k in 0..self.cols {
                acc += &self[(i, k)] * &rhs[(k, j)];
            }
            acc
        }))
    }

    pub fn matvec(&self, x: &[Complex]) -> Result<Vec<Complex>> {
        if self.cols != x.len() {
            return Err(Error::contract("matrix-vector dimension mismatch"));
        }
        let bits = self.bits();
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Complex::zero(bits);
                for (k, xk) in x.iter().enumerate() {
                    acc += &self[(i, k)] * xk;
                }
                acc
            })
            .collect())
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::contract("matrix dimension mismatch"));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)]))
    }

    /// Square submatrix on the given row/column index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }

    /// Exact Hermitian test on the stored entries.
    pub fn is_hermitian(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            if !self[(i, i)].im.is_zero() {
                return false;
            }
            for j in i + 1..self.cols {
                if self[(i, j)] != self[(j, i)].conj() {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs(&self) -> Real {
        let mut m = Real::zero(self.bits());
        for z in &self.data {
            let a = z.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn frobenius(&self) -> Real {
        let mut acc = Real::zero(self.bits());
        for z in &self.data {
            acc += z.norm_sqr();
        }
        acc.sqrt()
    }

    pub fn trace(&self) -> Complex {
        let mut acc = Complex::zero(self.bits());
        for i in 0..self.rows.min(self.cols) {
            acc += &self[(i, i)];
        }
        acc
    }

    pub fn bits(&self) -> usize {
        self.data.first().map_or(64, Complex::bits)
    }

    pub(crate) fn swap(&mut self, a: (usize, usize), b: (usize, usize)) {
        let ia = a.0 * self.cols + a.1;
        let ib = b.0 * self.cols + b.1;
        self.data.swap(ia, ib);
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}
