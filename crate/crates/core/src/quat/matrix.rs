use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Quaternion;
use crate::error::{Error, Result};

/// Dense quaternionic matrix stored row-major.
///
/// JSON form: `{"rows": n, "cols": m, "data": [[w,x,y,z], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl TryFrom<RawMatrix> for QMatrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        QMatrix::from_vec(raw.rows, raw.cols, raw.data)
    }
}

impl QMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Quaternion>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch(format!("empty matrix shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        QMatrix { rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Quaternion::ONE } else { Quaternion::ZERO })
    }

    pub fn scalar(q: Quaternion) -> Self {
        QMatrix { rows: 1, cols: 1, data: vec![q] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn row_vector(entries: &[Quaternion]) -> Self {
        Self::from_fn(1, entries.len(), |_, j| entries[j])
    }

    pub fn diag(entries: &[Quaternion]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { entries[i] } else { Quaternion::ZERO })
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

    pub fn data(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|q| *q == Quaternion::ZERO)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Quaternion::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn check_same_shape(&self, other: &QMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &QMatrix, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> QMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect();
        QMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|q| f(*q)).collect() }
    }

    pub fn scale(&self, s: f64) -> QMatrix {
        self.map(|q| q * s)
    }

    /// `q * M`, the scalar acting from the left on every entry.
    pub fn lmul(&self, q: Quaternion) -> QMatrix {
        self.map(|e| q * e)
    }

    /// `M * q`, the scalar acting from the right on every entry.
    pub fn rmul(&self, q: Quaternion) -> QMatrix {
        self.map(|e| e * q)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance; `inf` on shape mismatch.
    pub fn max_abs_diff(&self, other: &QMatrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| a.dist(*b)).fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.max_abs_diff(&self.adjoint())
    }

    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> QMatrix {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)])
    }

    pub fn set_block(&mut self, row0: usize, col0: usize, b: &QMatrix) {
        assert!(row0 + b.rows <= self.rows && col0 + b.cols <= self.cols, "block out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(row0 + i, col0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn vstack(blocks: &[&QMatrix]) -> Result<QMatrix> {
        let first = blocks.first().ok_or_else(|| Error::ShapeMismatch("no blocks".into()))?;
        let cols = first.cols;
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::ShapeMismatch("vstack with differing column counts".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = QMatrix::zeros(rows, cols);
        let mut r = 0;
        for b in blocks {
            out.set_block(r, 0, b);
            r += b.rows;
        }
        Ok(out)
    }

    /// Solves `self * X = rhs` by Gaussian elimination with partial pivoting on
    /// entry modulus. Row operations multiply from the left.
    ///
    /// A pivot below `1e-12` times the norm of its row is rejected.
    pub fn solve(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if !self.is_square() || rhs.rows != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve with {}x{} system and {}x{} right-hand side",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let n = self.rows;
        let m = rhs.cols;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for k in 0..n {
            let (p, pivot_abs) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let row_norm = (k..n).map(|j| a[(p, j)].norm_sqr()).sum::<f64>().sqrt();
            if !(pivot_abs > 1e-12 * row_norm) || pivot_abs == 0.0 {
                return Err(Error::SingularMatrix);
            }
            if p != k {
                a.swap_rows(p, k);
                b.swap_rows(p, k);
            }
            let pivot_inv = a[(k, k)].inv().map_err(|_| Error::SingularMatrix)?;
            for i in (k + 1)..n {
                let factor = a[(i, k)] * pivot_inv;
                if factor == Quaternion::ZERO {
                    continue;
                }
                for j in k..n {
                    let t = factor * a[(k, j)];
                    a[(i, j)] -= t;
                }
                for j in 0..m {
                    let t = factor * b[(k, j)];
                    b[(i, j)] -= t;
                }
            }
        }
        let mut x = QMatrix::zeros(n, m);
        for k in (0..n).rev() {
            let pivot_inv = a[(k, k)].inv().map_err(|_| Error::SingularMatrix)?;
            for j in 0..m {
                let mut acc = b[(k, j)];
                for l in (k + 1)..n {
                    acc -= a[(k, l)] * x[(l, j)];
                }
                x[(k, j)] = pivot_inv * acc;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch("inverse of a non-square matrix".into()));
        }
        self.solve(&QMatrix::identity(self.rows))
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

// The operator forms panic on shape mismatch; use `matmul`/`try_add` for
// fallible versions.
impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, o: &QMatrix) -> QMatrix {
        self.matmul(o).expect("matrix product shape mismatch")
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, o: &QMatrix) -> QMatrix {
        self.try_add(o).expect("matrix sum shape mismatch")
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, o: &QMatrix) -> QMatrix {
        self.try_sub(o).expect("matrix difference shape mismatch")
    }
}

impl Neg for &QMatrix {
    type Output = QMatrix;
    fn neg(self) -> QMatrix {
        self.map(|q| -q)
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("({})", self[(i, j)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
