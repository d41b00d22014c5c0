//! Dense floating-point kernels: LU, matrix exponential, symmetric
//! eigenproblems and least squares.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::linalg::Mat;
use crate::scalar::{c64_abs, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum NumericError {
    Singular,
    Shape,
    /// Least squares with more unknowns than samples.
    Underdetermined { rows: usize, cols: usize },
    NoConvergence,
}

impl core::fmt::Display for NumericError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            NumericError::Singular => write!(f, "matrix is singular"),
            NumericError::Shape => write!(f, "incompatible matrix shapes"),
            NumericError::Underdetermined { rows, cols } => {
                write!(f, "least squares needs at least {cols} samples, got {rows}")
            }
            NumericError::NoConvergence => write!(f, "iteration did not converge"),
        }
    }
}

impl core::error::Error for NumericError {}

/// LU with partial pivoting; returns the packed factors, permutation and sign.
fn lu(a: &Mat<C64>) -> Result<(Mat<C64>, Vec<usize>, f64), NumericError> {
    if !a.is_square() {
        return Err(NumericError::Shape);
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    for k in 0..n {
        let mut p = k;
        let mut best = c64_abs(*m.get(k, k));
        for i in k + 1..n {
            let v = c64_abs(*m.get(i, k));
            if v > best {
                best = v;
                p = i;
            }
        }
        if best == 0.0 {
            return Err(NumericError::Singular);
        }
        if p != k {
            for j in 0..n {
                let t = *m.get(k, j);
                m.set(k, j, *m.get(p, j));
                m.set(p, j, t);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let piv = *m.get(k, k);
        for i in k + 1..n {
            let f = *m.get(i, k) / piv;
            m.set(i, k, f);
            for j in k + 1..n {
                let v = *m.get(i, j) - f * *m.get(k, j);
                m.set(i, j, v);
            }
        }
    }
    Ok((m, perm, sign))
}

pub fn det(a: &Mat<C64>) -> C64 {
    match lu(a) {
        Ok((m, _, sign)) => (0..a.rows()).fold(C64::new(sign, 0.0), |acc, i| acc * *m.get(i, i)),
        Err(_) => C64::new(0.0, 0.0),
    }
}

/// Solve `A X = B`.
pub fn solve(a: &Mat<C64>, b: &Mat<C64>) -> Result<Mat<C64>, NumericError> {
    if a.rows() != b.rows() {
        return Err(NumericError::Shape);
    }
    let (m, perm, _) = lu(a)?;
    let n = a.rows();
    let mut x = Mat::from_fn(n, b.cols(), |i, j| *b.get(perm[i], j));
    for c in 0..b.cols() {
        for i in 0..n {
            let mut v = *x.get(i, c);
            for k in 0..i {
                v -= *m.get(i, k) * *x.get(k, c);
            }
            x.set(i, c, v);
        }
        for i in (0..n).rev() {
            let mut v = *x.get(i, c);
            for k in i + 1..n {
                v -= *m.get(i, k) * *x.get(k, c);
            }
            x.set(i, c, v / *m.get(i, i));
        }
    }
    Ok(x)
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &Mat<C64>) -> Mat<C64> {
    let n = a.rows();
    let norm = (0..n).map(|i| (0..n).map(|j| c64_abs(*a.get(i, j))).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0i32;
    if norm > 0.5 {
        s = Float::ceil(Float::log2(norm / 0.5)) as i32;
    }
    let scaled = a.scale(&C64::new(Float::powi(2.0, -s), 0.0));
    let mut out = Mat::<C64>::identity(n);
    let mut term = Mat::<C64>::identity(n);
    for k in 1..=20 {
        term = term.mul(&scaled).scale(&C64::new(1.0 / k as f64, 0.0));
        out = out.add(&term);
    }
    for _ in 0..s {
        out = out.mul(&out);
    }
    out
}

/// Eigen-decomposition of a real symmetric matrix (row-major, `n×n`) by
/// cyclic Jacobi rotations. Eigenvalues ascending; eigenvectors are columns.
pub fn jacobi_eigen(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>), NumericError> {
    if a.len() != n * n {
        return Err(NumericError::Shape);
    }
    let mut m = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = m.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| m[i * n + j] * m[i * n + j]).sum();
        if off.sqrt() <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(NumericError::NoConvergence);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].partial_cmp(&m[j * n + j]).unwrap_or(core::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vecs = vec![0.0; n * n];
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vecs[k * n + new] = v[k * n + old];
        }
    }
    Ok((vals, vecs))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstsqResult {
    pub coeffs: Vec<f64>,
    /// Root-mean-square residual.
    pub rms_residual: f64,
    /// 2-norm condition number of the column-scaled design matrix.
    pub condition: f64,
}

/// Least squares `min ‖A x − b‖` by Householder QR, with `A` row-major
/// (`rows × cols`). Columns are scaled to unit norm before factoring.
pub fn least_squares(a: &[f64], rows: usize, cols: usize, b: &[f64]) -> Result<LstsqResult, NumericError> {
    if a.len() != rows * cols || b.len() != rows {
        return Err(NumericError::Shape);
    }
    if rows < cols {
        return Err(NumericError::Underdetermined { rows, cols });
    }
    let mut colscale = vec![0.0; cols];
    for (j, s) in colscale.iter_mut().enumerate() {
        *s = (0..rows).map(|i| a[i * cols + j] * a[i * cols + j]).sum::<f64>().sqrt();
        if *s == 0.0 {
            return Err(NumericError::Singular);
        }
    }
    let mut r: Vec<f64> = (0..rows * cols).map(|k| a[k] / colscale[k % cols]).collect();
    let condition = {
        let mut g = vec![0.0; cols * cols];
        for i in 0..cols {
            for j in 0..cols {
                g[i * cols + j] = (0..rows).map(|k| r[k * cols + i] * r[k * cols + j]).sum();
            }
        }
        let (ev, _) = jacobi_eigen(&g, cols)?;
        let lo = ev[0].max(0.0);
        if lo == 0.0 {
            f64::INFINITY
        } else {
            (ev[cols - 1] / lo).sqrt()
        }
    };
    let mut y = b.to_vec();
    for k in 0..cols {
        let norm = (k..rows).map(|i| r[i * cols + k] * r[i * cols + k]).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(NumericError::Singular);
        }
        let alpha = if r[k * cols + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| r[i * cols + k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i - k] * r[i * cols + j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..rows {
                r[i * cols + j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i - k] * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..rows {
            y[i] -= f * v[i - k];
        }
    }
    let mut x = vec![0.0; cols];
    for i in (0..cols).rev() {
        let mut s = y[i];
        for j in i + 1..cols {
            s -= r[i * cols + j] * x[j];
        }
        x[i] = s / r[i * cols + i];
    }
    let coeffs: Vec<f64> = x.iter().zip(&colscale).map(|(xi, s)| xi / s).collect();
    let mut ss = 0.0;
    for i in 0..rows {
        let pred: f64 = (0..cols).map(|j| a[i * cols + j] * coeffs[j]).sum();
        ss += (pred - b[i]) * (pred - b[i]);
    }
    Ok(LstsqResult { coeffs, rms_residual: (ss / rows as f64).sqrt(), condition })
}

/// Simple linear regression; returns `(slope, intercept)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64), NumericError> {
    let a: Vec<f64> = x.iter().flat_map(|&xi| [xi, 1.0]).collect();
    let r = least_squares(&a, x.len(), 2, y)?;
    Ok((r.coeffs[0], r.coeffs[1]))
}
