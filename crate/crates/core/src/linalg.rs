//! Dense matrices over any [`Ring`].

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex;

use crate::scalar::Ring;

#[derive(Clone, PartialEq)]
pub struct Mat<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: fmt::Debug> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl<R: Clone> Mat<R> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<R>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Mat { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, v: R) -> Self {
        Mat { rows, cols, data: alloc::vec![v; rows * cols] }
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

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut R {
        &mut self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[R] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<S: Clone>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<R: Ring> Mat<R> {
    /// Zero matrix whose entries are `zero_like` of the template.
    pub fn zeros_like(rows: usize, cols: usize, template: &R) -> Self {
        Mat::filled(rows, cols, template.zero_like())
    }

    pub fn identity_like(n: usize, template: &R) -> Self {
        let zero = template.zero_like();
        let one = template.one_like();
        Mat::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.negate())
    }

    pub fn scale(&self, c: &Complex<R::Real>) -> Self {
        self.map(|a| a.scaled(c))
    }

    /// Entrywise left multiplication by a ring element.
    pub fn left_mul_elem(&self, r: &R) -> Self {
        self.map(|a| r.times(a))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let template = self.data.first().or(other.data.first()).expect("nonempty matrix");
        let mut out = Mat::zeros_like(self.rows, other.cols, template);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero_elem() {
                        continue;
                    }
                    let v = out.get(i, j).plus(&a.times(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn trace(&self) -> R {
        assert!(self.is_square(), "trace of non-square matrix");
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows {
            acc = acc.plus(self.get(i, i));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero_elem())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.max_abs()).fold(0.0, f64::max)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let template = self.data.first().or(other.data.first()).expect("nonempty matrix");
        let zero = template.zero_like();
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Mat::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                zero.clone()
            }
        })
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }
}

/// Square matrices form a (non-commutative) ring.
impl<R: Ring> Ring for Mat<R> {
    type Real = R::Real;
    fn zero_like(&self) -> Self {
        Mat::zeros_like(self.rows, self.cols, &self.data[0])
    }
    fn one_like(&self) -> Self {
        Mat::identity_like(self.rows, &self.data[0])
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn scaled(&self, c: &Complex<R::Real>) -> Self {
        self.scale(c)
    }
    fn max_abs(&self) -> f64 {
        Mat::max_abs(self)
    }
}

impl<T: crate::scalar::Real> Mat<Complex<T>> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::filled(rows, cols, Complex::new(T::zero(), T::zero()))
    }

    pub fn identity(n: usize) -> Self {
        Mat::identity_like(n, &Complex::new(T::zero(), T::zero()))
    }

    pub fn conj_transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }
}

impl Mat<Complex<f64>> {
    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        num_traits::Float::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    #[test]
    fn product_and_trace() {
        let a = Mat::from_rows(2, 2, alloc::vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)]);
        let b = Mat::<C64>::identity(2);
        assert_eq!(a.mul(&b), a);
        assert_eq!(a.trace(), C64::new(1.0, 0.0));
        let aa = a.mul(&a);
        assert_eq!(*aa.get(0, 0), C64::new(1.0, 2.0));
        assert_eq!(*aa.get(1, 1), C64::new(0.0, 2.0));
    }

    #[test]
    fn direct_sum_shape() {
        let a = Mat::<C64>::identity(2);
        let b = Mat::<C64>::identity(3).scale(&C64::new(2.0, 0.0));
        let s = a.direct_sum(&b);
        assert_eq!(s.rows(), 5);
        assert_eq!(s.trace(), C64::new(8.0, 0.0));
    }
}
