//! Dense row-major complex matrix used for inputs, decoded outputs and the
//! classical oracle.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{c, cone, czero, Amp, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Amp<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = cone();
        }
        m
    }

    pub fn diagonal(diag: &[Amp<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = *d;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Amp<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<Amp<T>>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Real-valued convenience constructor.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let nested: Vec<Vec<Amp<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(T::lit(x), T::zero())).collect())
            .collect();
        Self::from_rows(&nested)
    }

    /// Column vector.
    pub fn column(v: &[Amp<T>]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Amp<T>] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Amp<T>> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Amp<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn frobenius_norm(&self) -> T {
        crate::scalar::norm_sqr(&self.data).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.data
            .iter()
            .all(|a| a.re == T::zero() && a.im == T::zero())
    }

    pub fn scaled(&self, k: Amp<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * k).collect(),
        }
    }

    pub fn scaled_real(&self, k: T) -> Self {
        self.scaled(c(k, T::zero()))
    }

    /// Same matrix divided by its Frobenius norm. Zero matrices are returned as is.
    pub fn normalized(&self) -> Self {
        let n = self.frobenius_norm();
        if n == T::zero() {
            self.clone()
        } else {
            self.scaled_real(n.recip())
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    /// Largest entrywise modulus of `self - other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((a - b).norm()))
    }

    /// Copy of the top-left `rows x cols` block, zero-extended if larger.
    pub fn resized(&self, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows.min(self.rows) {
            for j in 0..cols.min(self.cols) {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }

    pub fn map<U: Real>(&self, f: impl Fn(Amp<T>) -> Amp<U>) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Amp<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Amp<T> {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Amp<T> {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjoint_conjugates_and_transposes() {
        let m = Matrix::<f64>::from_rows(&[vec![c(1.0, 2.0), c(3.0, -1.0)]]).unwrap();
        let a = m.adjoint();
        assert_eq!(a.shape(), (2, 1));
        assert_eq!(a[(0, 0)], c(1.0, -2.0));
        assert_eq!(a[(1, 0)], c(3.0, 1.0));
    }

    #[test]
    fn ragged_rows_rejected() {
        let r = Matrix::<f64>::from_rows(&[vec![cone()], vec![cone(), cone()]]);
        assert!(matches!(r, Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn resize_pads_with_zeros() {
        let m = Matrix::<f64>::from_real(&[&[1.0, 2.0, 3.0]]).unwrap();
        let p = m.resized(2, 4);
        assert_eq!(p.shape(), (2, 4));
        assert_eq!(p[(0, 2)], c(3.0, 0.0));
        assert_eq!(p[(1, 0)], czero());
        assert_eq!(p.resized(1, 3), m);
    }
}
