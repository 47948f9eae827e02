//! Thin QR factorization with column insertion and removal.
//!
//! Insertion appends a column by modified Gram–Schmidt with one round of
//! re-orthogonalization. Removal deletes a column of `R` and restores the
//! triangular shape with a sweep of Givens rotations, which are mirrored onto
//! the columns of `Q`. The diagonal of `R` is kept strictly positive.

use super::{axpy, check_len, dot, norm, DenseMatrix};
use crate::error::{Error, Result};

/// Relative threshold below which a new diagonal entry of `R` marks the
/// inserted column as dependent.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const SINGULAR_DIAG: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct QrState {
    dim: usize,
    rank_tol: f64,
    cols: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
    // r[j] is column j of R; every column has k entries.
    r: Vec<Vec<f64>>,
}

impl QrState {
    pub fn new(dim: usize) -> Self {
        Self::with_rank_tol(dim, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tol(dim: usize, rank_tol: f64) -> Self {
        Self {
            dim,
            rank_tol,
            cols: Vec::new(),
            q: Vec::new(),
            r: Vec::new(),
        }
    }

    /// Factorizes the columns one by one; fails on the first dependent column.
    pub fn from_columns(dim: usize, columns: &[Vec<f64>], rank_tol: f64) -> Result<Self> {
        let mut qr = Self::with_rank_tol(dim, rank_tol);
        for c in columns {
            qr.insert_column(c)?;
        }
        Ok(qr)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored columns.
    pub fn len(&self) -> usize {
        self.cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.cols
    }

    pub fn q_column(&self, i: usize) -> &[f64] {
        &self.q[i]
    }

    pub fn r_entry(&self, row: usize, col: usize) -> f64 {
        self.r[col][row]
    }

    pub fn q_factor(&self) -> DenseMatrix {
        if self.q.is_empty() {
            return DenseMatrix::zeros(self.dim, 0);
        }
        DenseMatrix::from_columns(&self.q).expect("orthonormal columns are finite")
    }

    pub fn r_factor(&self) -> DenseMatrix {
        let k = self.len();
        let mut data = Vec::with_capacity(k * k);
        for col in &self.r {
            data.extend_from_slice(col);
        }
        DenseMatrix::new(k, k, data).expect("R entries are finite")
    }

    /// Appends a column. On `DegenerateColumn` the state is left untouched.
    pub fn insert_column(&mut self, column: &[f64]) -> Result<()> {
        check_len(self.dim, column.len())?;
        if column.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let k = self.len();
        let col_norm = norm(column);
        if k >= self.dim || col_norm == 0.0 {
            return Err(Error::DegenerateColumn);
        }

        let mut w = column.to_vec();
        let mut coeffs = vec![0.0; k];
        for _ in 0..2 {
            for (qi, ci) in self.q.iter().zip(coeffs.iter_mut()) {
                let h = dot(qi, &w);
                *ci += h;
                axpy(-h, qi, &mut w);
            }
        }
        let rho = norm(&w);
        if !(rho > self.rank_tol * col_norm) {
            return Err(Error::DegenerateColumn);
        }
        w.iter_mut().for_each(|v| *v /= rho);

        for c in &mut self.r {
            c.push(0.0);
        }
        coeffs.push(rho);
        self.r.push(coeffs);
        self.q.push(w);
        self.cols.push(column.to_vec());
        Ok(())
    }

    /// Deletes column `index`, keeping the order of the others.
    pub fn remove_column(&mut self, index: usize) -> Result<()> {
        let k = self.len();
        if index >= k {
            return Err(Error::IndexOutOfRange { index, len: k });
        }
        self.cols.remove(index);
        self.r.remove(index);

        // Columns index.. of R now carry one subdiagonal entry each.
        for j in index..k - 1 {
            let a = self.r[j][j];
            let b = self.r[j][j + 1];
            let h = a.hypot(b);
            if h == 0.0 {
                continue;
            }
            let (c, s) = (a / h, b / h);
            for col in &mut self.r[j..] {
                let (x, y) = (col[j], col[j + 1]);
                col[j] = c * x + s * y;
                col[j + 1] = -s * x + c * y;
            }
            self.r[j][j + 1] = 0.0;
            let (left, right) = self.q.split_at_mut(j + 1);
            let (qa, qb) = (&mut left[j], &mut right[0]);
            for (x, y) in qa.iter_mut().zip(qb.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = c * u + s * v;
                *y = -s * u + c * v;
            }
        }
        for col in &mut self.r {
            col.truncate(k - 1);
        }
        self.q.truncate(k - 1);

        for j in 0..k - 1 {
            if self.r[j][j] < 0.0 {
                for col in &mut self.r[j..] {
                    col[j] = -col[j];
                }
                self.q[j].iter_mut().for_each(|v| *v = -*v);
            }
        }
        Ok(())
    }

    /// `Qᵀ v`
    pub fn qt_mul(&self, v: &[f64]) -> Vec<f64> {
        self.q.iter().map(|qi| dot(qi, v)).collect()
    }

    /// `Q Qᵀ v`, the orthogonal projection onto the column span.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for qi in &self.q {
            axpy(dot(qi, v), qi, &mut out);
        }
        out
    }

    /// `v − Q Qᵀ v`, computed with two projection sweeps.
    pub fn residual(&self, v: &[f64]) -> Vec<f64> {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for qi in &self.q {
                let h = dot(qi, &w);
                axpy(-h, qi, &mut w);
            }
        }
        w
    }

    /// Solves `R x = rhs`.
    pub fn solve_r(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        back_substitute(self.len(), |i, j| self.r[j][i], rhs)
    }
}

/// Back-substitution for an upper-triangular square matrix.
pub fn solve_triangular(upper: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if upper.rows() != upper.cols() {
        return Err(Error::DimensionMismatch {
            expected: upper.rows(),
            found: upper.cols(),
        });
    }
    back_substitute(upper.rows(), |i, j| upper.get(i, j), rhs)
}

fn back_substitute(k: usize, entry: impl Fn(usize, usize) -> f64, rhs: &[f64]) -> Result<Vec<f64>> {
    check_len(k, rhs.len())?;
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let d = entry(i, i);
        if !(d.abs() > SINGULAR_DIAG) {
            return Err(Error::SingularTriangle { index: i });
        }
        let mut acc = rhs[i];
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            acc -= entry(i, j) * xj;
        }
        x[i] = acc / d;
    }
    Ok(x)
}
