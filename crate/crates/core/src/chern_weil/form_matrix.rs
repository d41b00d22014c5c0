use alloc::vec::Vec;

use num_complex::Complex;

use super::ChernWeilError;
use crate::algebra::{GeneratorSpace, Multivector};
use crate::linalg::Mat;
use crate::scalar::{cratio, Real, Ring};

/// Square matrix of even multivectors. Entries commute, so determinants and
/// power series behave as over a commutative ring.
#[derive(Debug, Clone, PartialEq)]
pub struct FormMatrix<T: Real = f64> {
    space: GeneratorSpace,
    mat: Mat<Multivector<T>>,
}

impl<T: Real> FormMatrix<T> {
    pub fn zeros(space: GeneratorSpace, dim: usize) -> Self {
        FormMatrix { space, mat: Mat::filled(dim, dim, Multivector::zero(space)) }
    }

    pub fn identity(space: GeneratorSpace, dim: usize) -> Self {
        Self::from_fn(space, dim, |i, j| if i == j { Multivector::one(space) } else { Multivector::zero(space) })
    }

    pub fn from_fn(space: GeneratorSpace, dim: usize, f: impl FnMut(usize, usize) -> Multivector<T>) -> Self {
        let mat = Mat::from_fn(dim, dim, f);
        FormMatrix { space, mat }
    }

    /// Entries must be even and live in `space`.
    pub fn from_mat(space: GeneratorSpace, mat: Mat<Multivector<T>>) -> Result<Self, ChernWeilError> {
        if !mat.is_square() {
            return Err(ChernWeilError::Shape);
        }
        for e in mat.data() {
            if e.space() != space {
                return Err(ChernWeilError::Algebra(crate::algebra::AlgebraError::SpaceMismatch));
            }
            if !e.is_even() {
                return Err(ChernWeilError::OddEntry);
            }
        }
        Ok(FormMatrix { space, mat })
    }

    /// Numeric matrix embedded as degree-zero forms.
    pub fn from_numeric(space: GeneratorSpace, a: &Mat<Complex<T>>) -> Self {
        Self::from_fn(space, a.rows(), |i, j| Multivector::scalar(space, a.get(i, j).clone()))
    }

    /// `a ⊗ x`: numeric matrix times a single even form.
    pub fn numeric_times(space: GeneratorSpace, a: &Mat<Complex<T>>, x: &Multivector<T>) -> Self {
        Self::from_fn(space, a.rows(), |i, j| x.scale(a.get(i, j)))
    }

    pub fn space(&self) -> GeneratorSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &Multivector<T> {
        self.mat.get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: Multivector<T>) {
        self.mat.set(i, j, v);
    }

    pub fn as_mat(&self) -> &Mat<Multivector<T>> {
        &self.mat
    }

    fn wrap(&self, mat: Mat<Multivector<T>>) -> Self {
        FormMatrix { space: self.space, mat }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.wrap(self.mat.add(&other.mat))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.wrap(self.mat.sub(&other.mat))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.wrap(self.mat.mul(&other.mat))
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        self.wrap(self.mat.scale(c))
    }

    /// Multiply every entry by the even form `x`.
    pub fn times_form(&self, x: &Multivector<T>) -> Self {
        self.wrap(self.mat.left_mul_elem(x))
    }

    pub fn transpose(&self) -> Self {
        self.wrap(self.mat.transpose())
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.mat.neg())
    }

    pub fn trace(&self) -> Multivector<T> {
        if self.dim() == 0 {
            return Multivector::zero(self.space);
        }
        self.mat.trace()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        self.wrap(self.mat.direct_sum(&other.mat))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn map(&self, f: impl Fn(&Multivector<T>) -> Multivector<T>) -> Self {
        self.wrap(self.mat.map(f))
    }

    /// Degree-zero part as a numeric matrix.
    pub fn scalar_part(&self) -> Mat<Complex<T>> {
        self.mat.map(|e| e.scalar_part())
    }

    /// `M − (scalar part)`.
    pub fn nilpotent_part(&self) -> Self {
        self.map(|e| e.filter(|k| k != 0))
    }

    /// `c` when the scalar part is `c·I`.
    pub fn scalar_multiple_of_identity(&self) -> Option<Complex<T>> {
        let s = self.scalar_part();
        let c = if self.dim() == 0 { cratio(0, 1) } else { s.get(0, 0).clone() };
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let want = if i == j { c.clone() } else { cratio(0, 1) };
                if *s.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.space, self.dim());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Re-express every entry in a larger generator space.
    pub fn embed(&self, target: GeneratorSpace) -> Result<Self, ChernWeilError> {
        let entries: Result<Vec<_>, _> = self.mat.data().iter().map(|e| e.embed(target)).collect();
        Ok(FormMatrix { space: target, mat: Mat::from_rows(self.dim(), self.dim(), entries?) })
    }

    pub fn to_f64(&self) -> FormMatrix<f64> {
        FormMatrix { space: self.space, mat: self.mat.map(|e| e.to_f64()) }
    }

    pub fn max_abs(&self) -> f64 {
        Ring::max_abs(&self.mat)
    }
}
