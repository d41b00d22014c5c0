use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{One, Zero};

use super::{AlgebraError, Generator, GeneratorSpace};
use crate::scalar::{Real, Ring};

/// Sorted-bitmask key of a monomial in canonical order.
pub type Monomial = u64;

/// Element of `Λ(V*) ⊗̂ R(ϑ, da, dā)` with complex coefficients over `T`.
///
/// Zero coefficients are never stored, so structural equality is algebraic
/// equality.
#[derive(Clone, PartialEq)]
pub struct Multivector<T: Real = f64> {
    space: GeneratorSpace,
    terms: BTreeMap<Monomial, Complex<T>>,
}

/// Sign of moving monomial `b` past monomial `a` into sorted order when
/// forming `a ∧ b`.
fn reorder_sign(a: u64, b: u64) -> bool {
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a >> j >> 1).count_ones();
    }
    swaps % 2 == 1
}

impl<T: Real> Multivector<T> {
    pub fn zero(space: GeneratorSpace) -> Self {
        Multivector { space, terms: BTreeMap::new() }
    }

    pub fn scalar(space: GeneratorSpace, c: Complex<T>) -> Self {
        let mut m = Self::zero(space);
        m.add_term(0, c);
        m
    }

    pub fn one(space: GeneratorSpace) -> Self {
        Self::scalar(space, Complex::one())
    }

    pub fn generator(space: GeneratorSpace, g: Generator) -> Result<Self, AlgebraError> {
        let bit = space.bit(g)?;
        let mut m = Self::zero(space);
        m.add_term(1u64 << bit, Complex::one());
        Ok(m)
    }

    /// Frame covector `e^{i+1}`; panics on a bad index.
    pub fn e(space: GeneratorSpace, i: usize) -> Self {
        Self::generator(space, Generator::Frame(i)).expect("frame index in range")
    }

    /// Wedge of the listed generators in the given order.
    pub fn monomial(space: GeneratorSpace, gens: &[Generator], c: Complex<T>) -> Result<Self, AlgebraError> {
        let mut out = Self::scalar(space, c);
        for g in gens {
            out = out.wedge(&Self::generator(space, *g)?)?;
        }
        Ok(out)
    }

    /// Build directly from a canonical key; the caller vouches for the key.
    pub fn from_key(space: GeneratorSpace, key: Monomial, c: Complex<T>) -> Self {
        let mut m = Self::zero(space);
        m.add_term(key, c);
        m
    }

    pub fn space(&self) -> GeneratorSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Complex<T>)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: Monomial) -> Complex<T> {
        self.terms.get(&key).cloned().unwrap_or_else(Complex::zero)
    }

    /// Degree-0 coefficient.
    pub fn scalar_part(&self) -> Complex<T> {
        self.coeff(0)
    }

    pub fn add_term(&mut self, key: Monomial, c: Complex<T>) {
        if c.is_zero() {
            return;
        }
        if self.space.aux_degree(key) as usize > self.space.q_cap() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Complex::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(Monomial, &Complex<T>) -> Complex<T>) -> Self {
        let mut out = Self::zero(self.space);
        for (k, v) in &self.terms {
            out.add_term(*k, f(*k, v));
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(Monomial) -> bool) -> Self {
        let mut out = Self::zero(self.space);
        for (k, v) in &self.terms {
            if keep(*k) {
                out.terms.insert(*k, v.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        self.map_coeffs(|_, v| v.clone() * c.clone())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.space != other.space {
            return Err(AlgebraError::SpaceMismatch);
        }
        let mut out = Self::zero(self.space);
        let cap = self.space.q_cap() as u32;
        for (ka, va) in &self.terms {
            let aux_a = self.space.aux_degree(*ka);
            for (kb, vb) in &other.terms {
                if ka & kb != 0 || aux_a + self.space.aux_degree(*kb) > cap {
                    continue;
                }
                let c = va.clone() * vb.clone();
                let c = if reorder_sign(*ka, *kb) { -c } else { c };
                out.add_term(ka | kb, c);
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.space != other.space {
            return Err(AlgebraError::SpaceMismatch);
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(*k, v.clone());
        }
        Ok(out)
    }

    /// Interior product `i_{e_v}`, a graded derivation of degree −1.
    pub fn interior(&self, v: usize) -> Result<Self, AlgebraError> {
        let n = self.space.n_frame();
        if v >= n {
            return Err(AlgebraError::FrameIndex { index: v, n_frame: n });
        }
        let bit = 1u64 << v;
        let below = bit - 1;
        let mut out = Self::zero(self.space);
        for (k, c) in &self.terms {
            if k & bit == 0 {
                continue;
            }
            let c = if (k & below).count_ones() % 2 == 1 { -c.clone() } else { c.clone() };
            out.add_term(k & !bit, c);
        }
        Ok(out)
    }

    /// `e^v ∧ a − i_{e_v} a`.
    pub fn clifford_symbol(&self, v: usize) -> Result<Self, AlgebraError> {
        let ev = Self::generator(self.space, Generator::Frame(v))?;
        ev.wedge(self)?.try_add(&self.interior(v)?.neg())
    }

    /// Component of frame degree `i` (any auxiliary degree).
    pub fn frame_part(&self, i: u32) -> Self {
        let space = self.space;
        self.filter(|k| space.frame_degree(k) == i)
    }

    pub fn aux_part(&self, j: u32) -> Self {
        let space = self.space;
        self.filter(|k| space.aux_degree(k) == j)
    }

    pub fn max_frame_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| self.space.frame_degree(*k)).max()
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|k| k.count_ones() % 2 == 1)
    }

    pub fn has_aux(&self) -> bool {
        let aux = self.space.aux_mask();
        self.terms.keys().any(|k| k & aux != 0)
    }

    /// `(η)^{da dā}`: the coefficient `η₃` in `η₀ + da η₁ + dā η₂ + da dā η₃`.
    pub fn extract_da_dabar(&self) -> Result<Self, AlgebraError> {
        let mask = self.space.da_dabar_mask().ok_or(AlgebraError::MissingGenerator(Generator::Da))?;
        let mut out = Self::zero(self.space);
        for (k, v) in &self.terms {
            if k & mask == mask {
                // da dā is even, so moving it to the front costs no sign.
                out.add_term(k & !mask, v.clone());
            }
        }
        Ok(out)
    }

    /// Re-express in a space that contains every generator used here.
    pub fn embed(&self, target: GeneratorSpace) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(target);
        for (k, v) in &self.terms {
            let mut rest = *k;
            let mut gens = Vec::new();
            while rest != 0 {
                let b = rest.trailing_zeros();
                rest &= rest - 1;
                gens.push(self.space.generator_at(b));
            }
            let mono = Self::monomial(target, &gens, v.clone())?;
            for (k2, v2) in mono.terms {
                out.add_term(k2, v2);
            }
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        let mut out = Multivector::zero(self.space);
        for (k, v) in &self.terms {
            out.add_term(*k, Complex::new(v.re.to_f64(), v.im.to_f64()));
        }
        out
    }

    /// Powers by repeated wedge; nilpotent elements vanish in finitely many steps.
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::one(self.space);
        for _ in 0..k {
            out = out.wedge(self).expect("same space");
        }
        out
    }
}

impl Multivector<f64> {
    /// Drop coefficients below `tol` in magnitude.
    pub fn chop(&self, tol: f64) -> Self {
        self.filter_coeffs(|c| crate::scalar::c64_abs(*c) > tol)
    }

    fn filter_coeffs(&self, keep: impl Fn(&Complex<f64>) -> bool) -> Self {
        let mut out = Self::zero(self.space);
        for (k, v) in &self.terms {
            if keep(v) {
                out.terms.insert(*k, *v);
            }
        }
        out
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| crate::scalar::c64_abs(*c)).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.space == other.space && (self.clone() - other.clone()).max_abs_coeff() <= tol
    }
}

impl<T: Real> fmt::Debug for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[")?;
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?}, {:?})*{}", v.re, v.im, KeyName(self.space, *k))?;
        }
        write!(f, "]")
    }
}

struct KeyName(GeneratorSpace, Monomial);

impl fmt::Display for KeyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 == 0 {
            return write!(f, "1");
        }
        let mut rest = self.1;
        let mut first = true;
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            if !first {
                write!(f, "^")?;
            }
            first = false;
            match self.0.generator_at(b) {
                Generator::Frame(i) => write!(f, "e{}", i + 1)?,
                Generator::Theta(j) => write!(f, "th{}", j + 1)?,
                Generator::Da => write!(f, "da")?,
                Generator::DaBar => write!(f, "dab")?,
            }
        }
        Ok(())
    }
}

/// Canonical dump: one term per line, `coeff * g^g^...`.
impl<T: Real> fmt::Display for Multivector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.terms {
            writeln!(f, "({:?}{:+?}i) * {}", v.re, v.im, KeyName(self.space, *k))?;
        }
        Ok(())
    }
}

impl<T: Real> Add for Multivector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("multivector spaces differ")
    }
}

impl<T: Real> Sub for Multivector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_add(&-rhs).expect("multivector spaces differ")
    }
}

impl<T: Real> Neg for Multivector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map_coeffs(|_, v| -v.clone())
    }
}

impl<T: Real> Mul for Multivector<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.wedge(&rhs).expect("multivector spaces differ")
    }
}

impl<'a, T: Real> Mul<&'a Multivector<T>> for &'a Multivector<T> {
    type Output = Multivector<T>;
    fn mul(self, rhs: &'a Multivector<T>) -> Multivector<T> {
        self.wedge(rhs).expect("multivector spaces differ")
    }
}

impl<T: Real> Ring for Multivector<T> {
    type Real = T;
    fn zero_like(&self) -> Self {
        Self::zero(self.space)
    }
    fn one_like(&self) -> Self {
        Self::one(self.space)
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, other: &Self) -> Self {
        self.try_add(other).expect("multivector spaces differ")
    }
    fn minus(&self, other: &Self) -> Self {
        self.try_add(&other.clone().neg()).expect("multivector spaces differ")
    }
    fn times(&self, other: &Self) -> Self {
        self.wedge(other).expect("multivector spaces differ")
    }
    fn negate(&self) -> Self {
        self.clone().neg()
    }
    fn scaled(&self, c: &Complex<T>) -> Self {
        self.scale(c)
    }
    fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.max_abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cratio, Rational};

    type Mv = Multivector<Rational>;

    fn space4() -> GeneratorSpace {
        GeneratorSpace::new(4, 3, true, 2).unwrap()
    }

    #[test]
    fn repeated_generator_vanishes() {
        let s = space4();
        let e12 = Mv::e(s, 0) * Mv::e(s, 1);
        assert!((e12.clone() * e12).is_zero());
    }

    #[test]
    fn da_dabar_product_sign() {
        let s = space4();
        let eta1 = cratio::<Rational>(3, 2);
        let eta2 = cratio::<Rational>(-5, 7);
        let a = Mv::generator(s, Generator::Da).unwrap().scale(&eta1);
        let b = Mv::generator(s, Generator::DaBar).unwrap().scale(&eta2);
        let dadab = Mv::monomial(s, &[Generator::Da, Generator::DaBar], eta1 * eta2).unwrap();
        assert_eq!(a * b, dadab);
    }

    #[test]
    fn theta_cap_truncates() {
        let s = GeneratorSpace::new(2, 3, false, 2).unwrap();
        let th = |j| Mv::generator(s, Generator::Theta(j)).unwrap();
        assert!((th(0) * th(1) * th(2)).is_zero());
        assert!(!(th(0) * th(1)).is_zero());
    }

    #[test]
    fn interior_examples() {
        let s = space4();
        let e12 = Mv::e(s, 0) * Mv::e(s, 1);
        assert_eq!(e12.interior(0).unwrap(), Mv::e(s, 1));
        assert_eq!(e12.interior(1).unwrap(), -Mv::e(s, 0));
        assert!(e12.interior(0).unwrap().interior(0).unwrap().is_zero());
        assert!(matches!(e12.interior(4), Err(AlgebraError::FrameIndex { .. })));
    }

    #[test]
    fn clifford_on_one() {
        let s = space4();
        let one = Mv::one(s);
        assert_eq!(one.clifford_symbol(0).unwrap(), Mv::e(s, 0));
    }

    #[test]
    fn extract_examples() {
        let s = space4();
        let da = Mv::generator(s, Generator::Da).unwrap();
        let dab = Mv::generator(s, Generator::DaBar).unwrap();
        let e1 = Mv::e(s, 0);
        let x = da.clone() * dab.clone() * e1.clone();
        assert_eq!(x.extract_da_dabar().unwrap(), e1.clone());
        let y = e1.clone() * Mv::e(s, 1) + da.clone() * e1.clone();
        assert!(y.extract_da_dabar().unwrap().is_zero());
        let even = e1.clone() * Mv::e(s, 2) + Mv::scalar(s, cratio(1, 3));
        let dd = da * dab;
        let z = even.clone() * dd.clone() + dd * even.clone();
        assert_eq!(z.extract_da_dabar().unwrap(), even.clone() + even);
    }

    #[test]
    fn extract_requires_da() {
        let s = GeneratorSpace::frame(2).unwrap();
        assert!(Mv::one(s).extract_da_dabar().is_err());
    }

    #[test]
    fn mismatched_spaces_error() {
        let a = Mv::one(GeneratorSpace::frame(2).unwrap());
        let b = Mv::one(GeneratorSpace::frame(4).unwrap());
        assert_eq!(a.wedge(&b), Err(AlgebraError::SpaceMismatch));
    }

    #[test]
    fn display_is_canonical() {
        let s = space4();
        let x = Mv::e(s, 1) * Mv::e(s, 0) + Mv::generator(s, Generator::Da).unwrap();
        let text = alloc::format!("{}", x.to_f64());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["(-1.0+0.0i) * e1^e2", "(1.0+0.0i) * da"]);
    }
}
