//! Classical reference linear algebra: the ground truth every pipeline is
//! checked against.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{cone, czero, Amp, Real};

/// Pivots smaller than this are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport<T, V> {
    pub value: V,
    /// `‖A‖₁ · ‖A⁻¹‖₁`, always at least 1.
    pub condition_estimate: T,
    /// Row chosen as pivot at each elimination step.
    pub pivot_log: Vec<usize>,
}

fn pivot_row<T: Real>(m: &Matrix<T>, col: usize) -> usize {
    (col..m.rows())
        .max_by(|&a, &b| {
            m[(a, col)]
                .norm()
                .partial_cmp(&m[(b, col)].norm())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(col)
}

fn swap_rows<T: Real>(m: &mut Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let t = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = t;
    }
}

fn require_square<T: Real>(a: &Matrix<T>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Determinant by LU factorization with partial pivoting. Returns exactly
/// zero when a pivot falls below [`PIVOT_TOLERANCE`].
pub fn det_lu<T: Real>(a: &Matrix<T>) -> Result<Amp<T>> {
    require_square(a)?;
    let n = a.rows();
    let mut lu = a.clone();
    let mut det = cone::<T>();
    for k in 0..n {
        let p = pivot_row(&lu, k);
        if lu[(p, k)].norm() < T::lit(PIVOT_TOLERANCE) {
            return Ok(czero());
        }
        if p != k {
            swap_rows(&mut lu, p, k);
            det = -det;
        }
        let pivot = lu[(k, k)];
        det *= pivot;
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            for j in k + 1..n {
                let u = lu[(k, j)];
                lu[(i, j)] -= f * u;
            }
        }
    }
    Ok(det)
}

fn norm_1<T: Real>(a: &Matrix<T>) -> T {
    (0..a.cols())
        .map(|j| (0..a.rows()).fold(T::zero(), |s, i| s + a[(i, j)].norm()))
        .fold(T::zero(), T::max)
}

/// Inverse by Gauss–Jordan elimination with partial pivoting.
pub fn inverse_gj<T: Real>(a: &Matrix<T>) -> Result<OracleReport<T, Matrix<T>>> {
    require_square(a)?;
    let n = a.rows();
    let mut work = a.clone();
    let mut inv = Matrix::identity(n);
    let mut pivot_log = Vec::with_capacity(n);
    for k in 0..n {
        let p = pivot_row(&work, k);
        if work[(p, k)].norm() < T::lit(PIVOT_TOLERANCE) {
            return Err(Error::Singular);
        }
        pivot_log.push(p);
        swap_rows(&mut work, p, k);
        swap_rows(&mut inv, p, k);
        let pr = work[(k, k)].inv();
        for j in 0..n {
            work[(k, j)] *= pr;
            inv[(k, j)] *= pr;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = work[(i, k)];
            if f == czero() {
                continue;
            }
            for j in 0..n {
                let (wk, ik) = (work[(k, j)], inv[(k, j)]);
                work[(i, j)] -= f * wk;
                inv[(i, j)] -= f * ik;
            }
        }
    }
    let condition_estimate = (norm_1(a) * norm_1(&inv)).max(T::one());
    Ok(OracleReport {
        value: inv,
        condition_estimate,
        pivot_log,
    })
}

/// Matrix–vector contraction `Σ_j a_ij b_j`.
pub fn contract<T: Real>(a: &Matrix<T>, b: &[Amp<T>]) -> Result<Vec<Amp<T>>> {
    if a.cols() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix against vector of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    Ok((0..a.rows())
        .map(|i| a.row(i).iter().zip(b).map(|(x, y)| x * y).sum())
        .collect())
}

pub fn add<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} + {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let data = a.data().iter().zip(b.data()).map(|(x, y)| x + y).collect();
    Matrix::from_vec(a.rows(), a.cols(), data)
}

pub fn mul<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    if a.cols() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} * {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let mut out = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for k in 0..a.cols() {
            let aik = a[(i, k)];
            for j in 0..b.cols() {
                out[(i, j)] += aik * b[(k, j)];
            }
        }
    }
    Ok(out)
}

/// `Σ_j a_ij` for every row.
pub fn row_sums<T: Real>(a: &Matrix<T>) -> Vec<Amp<T>> {
    (0..a.rows()).map(|i| a.row(i).iter().sum()).collect()
}

/// Non-conjugating product `Σ_j ψ2_j ψ1_j`.
pub fn bilinear<T: Real>(psi1: &[Amp<T>], psi2: &[Amp<T>]) -> Result<Amp<T>> {
    if psi1.len() != psi2.len() {
        return Err(Error::ShapeMismatch(format!(
            "vectors of length {} and {}",
            psi1.len(),
            psi2.len()
        )));
    }
    Ok(psi1.iter().zip(psi2).map(|(a, b)| a * b).sum())
}
