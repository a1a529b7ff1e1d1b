//! Spectral helpers for small quaternionic matrices: the closed-form
//! functional calculus of `I - v* v` for a row `v`, the complex adjoint
//! representation, and a cyclic Jacobi eigensolver used for positivity tests.

use num_complex::Complex64;

use super::QMatrix;
use crate::error::{Error, Result};

/// Off-diagonal threshold for the Jacobi sweeps.
pub const JACOBI_THRESHOLD: f64 = 1e-13;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Computes `f(I_k - v* v)` for a `1 x k` row `v` with `s = v v* < 1`.
///
/// `v* v` is Hermitian of rank one with `(v* v)^2 = s v* v`, so
/// `f(I - v* v) = f(1) I + ((f(1 - s) - f(1)) / s) v* v`.
pub fn rank1_spectral(v: &QMatrix, f: impl Fn(f64) -> f64) -> Result<QMatrix> {
    if v.rows() != 1 {
        return Err(Error::ShapeMismatch(format!("expected a row vector, got {}x{}", v.rows(), v.cols())));
    }
    let k = v.cols();
    let s: f64 = v.data().iter().map(|q| q.norm_sqr()).sum();
    if !(s < 1.0) {
        return Err(Error::DomainError(format!("|v|^2 = {s} must be below 1")));
    }
    let f1 = f(1.0);
    let id = QMatrix::identity(k).scale(f1);
    if s == 0.0 {
        return Ok(id);
    }
    let coef = (f(1.0 - s) - f1) / s;
    let outer = &v.adjoint() * v;
    Ok(&id + &outer.scale(coef))
}

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch("complex matrix product".into()));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Complex adjoint representation in the `e1` slice: `q = a + b e2` with
/// `a = w + x i`, `b = y + z i`, mapped to `[[a, b], [-conj(b), conj(a)]]`
/// block by block.
pub fn complexify(m: &QMatrix) -> CMatrix {
    let (n, k) = m.shape();
    let mut out = CMatrix::zeros(2 * n, 2 * k);
    for i in 0..n {
        for j in 0..k {
            let q = m[(i, j)];
            let a = Complex64::new(q.w, q.x);
            let b = Complex64::new(q.y, q.z);
            out.set(2 * i, 2 * j, a);
            out.set(2 * i, 2 * j + 1, b);
            out.set(2 * i + 1, 2 * j, -b.conj());
            out.set(2 * i + 1, 2 * j + 1, a.conj());
        }
    }
    out
}

/// Eigenvalues of a real symmetric `n x n` matrix (row-major) by cyclic
/// Jacobi rotations, sorted ascending.
pub fn jacobi_eigenvalues(n: usize, mut a: Vec<f64>) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "jacobi_eigenvalues: wrong buffer length");
    let scale = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = JACOBI_THRESHOLD * scale.max(f64::MIN_POSITIVE);
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[p * n + q] * a[p * n + q];
            }
        }
        (2.0 * s).sqrt()
    };
    let mut converged = off(&a) <= target;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
        sweeps += 1;
        converged = off(&a) <= target;
    }
    if !converged {
        return Err(Error::DomainError(format!("Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    Ok(eig)
}

/// Eigenvalues of a quaternionic Hermitian matrix, computed on the
/// `4n x 4n` real symmetric embedding of its complexification. Each
/// quaternionic eigenvalue appears four times.
pub fn hermitian_eigenvalues(m: &QMatrix, tol: f64) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch("eigenvalues of a non-square matrix".into()));
    }
    let defect = m.hermitian_defect();
    if defect > tol {
        return Err(Error::NotHermitian(defect));
    }
    let c = complexify(m);
    let n2 = c.rows;
    let n4 = 2 * n2;
    let mut real = vec![0.0; n4 * n4];
    for i in 0..n2 {
        for j in 0..n2 {
            // symmetrize to absorb the tolerated Hermitian defect
            let z = (c.get(i, j) + c.get(j, i).conj()) * 0.5;
            real[i * n4 + j] = z.re;
            real[(i + n2) * n4 + (j + n2)] = z.re;
            real[i * n4 + (j + n2)] = -z.im;
            real[(i + n2) * n4 + j] = z.im;
        }
    }
    jacobi_eigenvalues(n4, real)
}

pub fn min_eigenvalue(m: &QMatrix, tol: f64) -> Result<f64> {
    Ok(hermitian_eigenvalues(m, tol)?[0])
}

/// True iff every eigenvalue of the Hermitian matrix `m` is at least `-tol`.
pub fn is_psd(m: &QMatrix, tol: f64) -> Result<bool> {
    Ok(min_eigenvalue(m, tol)? >= -tol)
}
