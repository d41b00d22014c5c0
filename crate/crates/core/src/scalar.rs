//! Scalar layer shared by every module.
//!
//! Coefficients are always complex numbers over a real base field `T`.
//! `T = f64` is the numerical path; `T = Rational` gives exact arithmetic so
//! sign bookkeeping can be checked without float noise.

use core::fmt::Debug;
use core::ops::Neg;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{Num, Zero};

pub type C64 = Complex<f64>;
pub type Rational = Ratio<i128>;

/// Real base field for coefficients.
pub trait Real: Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> {
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    /// `exp(z)` when representable; exact types only manage `z = 0`.
    fn exp_complex(z: &Complex<Self>) -> Option<Complex<Self>>;
    /// Magnitude used for tolerance checks; exact types report zero only for zero.
    fn abs_f64(&self) -> f64 {
        let v = self.to_f64();
        if v < 0.0 {
            -v
        } else {
            v
        }
    }
}

impl Real for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(r: &Rational) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn exp_complex(z: &Complex<Self>) -> Option<Complex<Self>> {
        Some(z.exp())
    }
}

impl Real for Rational {
    fn from_ratio(num: i64, den: i64) -> Self {
        Ratio::new(num as i128, den as i128)
    }
    fn from_rational(r: &Rational) -> Self {
        *r
    }
    fn to_f64(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
    fn exp_complex(z: &Complex<Self>) -> Option<Complex<Self>> {
        if z.is_zero() {
            Some(Complex::new(Ratio::from_integer(1), Ratio::from_integer(0)))
        } else {
            None
        }
    }
}

pub fn cre<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

pub fn cratio<T: Real>(num: i64, den: i64) -> Complex<T> {
    cre(T::from_ratio(num, den))
}

pub fn crational<T: Real>(r: &Rational) -> Complex<T> {
    cre(T::from_rational(r))
}

pub fn imag_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Ring of matrix/polynomial coefficients.
///
/// Implemented by plain complex scalars and by [`crate::algebra::Multivector`].
/// Multivectors need a generator space to build a zero, hence `zero_like`.
pub trait Ring: Clone + Debug + PartialEq {
    type Real: Real;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn scaled(&self, c: &Complex<Self::Real>) -> Self;
    /// Largest coefficient magnitude, for float comparisons.
    fn max_abs(&self) -> f64;
}

impl<T: Real> Ring for Complex<T> {
    type Real = T;
    fn zero_like(&self) -> Self {
        Complex::zero()
    }
    fn one_like(&self) -> Self {
        Complex::new(T::one(), T::zero())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }
    fn minus(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }
    fn times(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
    fn scaled(&self, c: &Complex<T>) -> Self {
        self.clone() * c.clone()
    }
    fn max_abs(&self) -> f64 {
        let a = self.re.abs_f64();
        let b = self.im.abs_f64();
        if a > b {
            a
        } else {
            b
        }
    }
}

pub fn c64_abs(z: C64) -> f64 {
    num_traits::Float::hypot(z.re, z.im)
}
