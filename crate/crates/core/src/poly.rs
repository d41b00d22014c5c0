//! Multivariate polynomials with coefficients in a (possibly
//! non-commutative) [`Ring`]. Variables are real and commute with everything.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex;

use crate::scalar::{cre, Real, Ring};

pub type Exponent = Vec<u8>;

#[derive(Clone, PartialEq)]
pub struct Poly<R> {
    nvars: usize,
    zero: R,
    terms: BTreeMap<Exponent, R>,
}

impl<R: Ring> core::fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

impl<R: Ring> Poly<R> {
    /// Zero polynomial; `template` fixes the coefficient shape.
    pub fn zero(nvars: usize, template: &R) -> Self {
        Poly { nvars, zero: template.zero_like(), terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: R) -> Self {
        let mut p = Self::zero(nvars, &c);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `x_i` times the unit of the template's ring.
    pub fn var(nvars: usize, i: usize, template: &R) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars, template);
        p.add_term(e, template.one_like());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn zero_coeff(&self) -> &R {
        &self.zero
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &R)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponent, c: R) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c.is_zero_elem() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let s = old.plus(&c);
                if !s.is_zero_elem() {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn coeff(&self, e: &[u8]) -> R {
        self.terms.get(e).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.iter().map(|&k| k as usize).sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negate())
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn scale(&self, c: &Complex<R::Real>) -> Self {
        self.map(|x| x.scaled(c))
    }

    pub fn left_mul(&self, r: &R) -> Self {
        self.map(|x| r.times(x))
    }

    pub fn right_mul(&self, r: &R) -> Self {
        self.map(|x| x.times(r))
    }

    /// Product with coefficients multiplied in the order `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.times(cb));
            }
        }
        out
    }

    pub fn mul_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += 1;
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn deriv(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let k = e[i] as i64;
            let mut e = e.clone();
            e[i] -= 1;
            out.add_term(e, c.scaled(&cre(<R::Real as Real>::from_ratio(k, 1))));
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for i in 0..self.nvars {
            out = out.add(&self.deriv(i).deriv(i));
        }
        out
    }

    /// Euler operator `x·∇`.
    pub fn euler(&self) -> Self {
        self.map_by_degree(|d| <R::Real as Real>::from_ratio(d as i64, 1))
    }

    /// Scale the degree-`d` part by `f(d)`.
    pub fn map_by_degree(&self, f: impl Fn(usize) -> R::Real) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            let d: usize = e.iter().map(|&k| k as usize).sum();
            out.add_term(e.clone(), c.scaled(&cre(f(d))));
        }
        out
    }

    /// Solve `(k + x·∇) Ψ = F` for `k ≥ 1`, i.e. `Ψ(x) = ∫₀¹ s^{k−1} F(sx) ds`.
    pub fn radial_solve(&self, k: usize) -> Self {
        assert!(k >= 1, "radial solve needs k ≥ 1");
        self.map_by_degree(|d| <R::Real as Real>::from_ratio(1, (k + d) as i64))
    }

    /// Drop monomials of total degree above `max`.
    pub fn truncate(&self, max: usize) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            if e.iter().map(|&k| k as usize).sum::<usize>() <= max {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    /// Evaluate at a real point.
    pub fn eval(&self, x: &[R::Real]) -> R {
        let mut acc = self.zero.clone();
        for (e, c) in &self.terms {
            let mut m = <R::Real as num_traits::One>::one();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m = m * xi.clone();
                }
            }
            acc = acc.plus(&c.scaled(&cre(m)));
        }
        acc
    }

    /// `∫₀^{x_i} ... dx_i`, keeping the name `x_i` for the upper limit.
    pub fn antiderivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, &self.zero);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += 1;
            let k = e[i] as i64;
            out.add_term(e, c.scaled(&cre(<R::Real as Real>::from_ratio(1, k))));
        }
        out
    }

    /// Substitute `x_j ↦ images[j]`, polynomials with scalar coefficients in
    /// a new set of variables.
    pub fn compose(&self, images: &[Poly<Complex<R::Real>>]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let nv = images.first().map_or(0, |p| p.nvars);
        let one = Poly::constant(nv, crate::scalar::cratio::<R::Real>(1, 1));
        let mut out = Self::zero(nv, &self.zero);
        for (e, c) in &self.terms {
            let mut m = one.clone();
            for (img, &k) in images.iter().zip(e) {
                for _ in 0..k {
                    m = m.mul(img);
                }
            }
            for (e2, s) in &m.terms {
                out.add_term(e2.clone(), c.scaled(s));
            }
        }
        out
    }

    /// Fix `x_i = value`; the result has one variable fewer.
    pub fn eval_var(&self, i: usize, value: &R::Real) -> Self {
        let mut out = Self::zero(self.nvars - 1, &self.zero);
        for (e, c) in &self.terms {
            let mut m = <R::Real as num_traits::One>::one();
            for _ in 0..e[i] {
                m = m * value.clone();
            }
            let mut e2 = e.clone();
            e2.remove(i);
            out.add_term(e2, c.scaled(&cre(m)));
        }
        out
    }

    /// Same polynomial with extra trailing variables.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let mut out = Self::zero(nvars, &self.zero);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e.resize(nvars, 0);
            out.add_term(e, c.clone());
        }
        out
    }

    /// Apply `f` to every coefficient, possibly changing the ring.
    pub fn map_into<S: Ring>(&self, template: &S, f: impl Fn(&R) -> S) -> Poly<S> {
        let mut out = Poly::zero(self.nvars, template);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.max_abs()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cratio, Rational};

    type C = Complex<Rational>;

    #[test]
    fn product_and_derivative() {
        let z: C = cratio(0, 1);
        let x = Poly::var(2, 0, &z);
        let y = Poly::var(2, 1, &z);
        let p = x.add(&y).mul(&x.add(&y));
        assert_eq!(p.coeff(&[1, 1]), cratio(2, 1));
        assert_eq!(p.deriv(0), x.add(&y).scale(&cratio(2, 1)));
        assert_eq!(p.laplacian(), Poly::constant(2, cratio(4, 1)));
        assert_eq!(p.eval(&[Rational::new(1, 2), Rational::new(1, 3)]), cratio(25, 36));
    }

    #[test]
    fn compose_antiderivative_and_partial_eval() {
        let z: C = cratio(0, 1);
        let x = Poly::var(2, 0, &z);
        let y = Poly::var(2, 1, &z);
        let p = x.mul(&x).mul(&y).add(&y.scale(&cratio(3, 1)));
        // x ↦ 1 + t, y ↦ 2t
        let t = Poly::var(1, 0, &z);
        let q = p.compose(&[t.add(&Poly::constant(1, cratio(1, 1))), t.scale(&cratio(2, 1))]);
        let tv = Rational::new(2, 7);
        assert_eq!(q.eval(&[tv]), p.eval(&[tv + Rational::from_integer(1), tv * Rational::from_integer(2)]));
        assert_eq!(p.antiderivative(1).deriv(1), p);
        assert_eq!(p.eval_var(0, &Rational::from_integer(2)).eval(&[tv]), p.eval(&[Rational::from_integer(2), tv]));
        assert_eq!(p.extend_vars(3).eval(&[tv, tv, tv]), p.eval(&[tv, tv]));
    }

    #[test]
    fn radial_solve_inverts_euler() {
        let z: C = cratio(0, 1);
        let x = Poly::var(2, 0, &z);
        let y = Poly::var(2, 1, &z);
        let f = x.mul(&y).add(&Poly::constant(2, cratio(3, 1))).add(&y.scale(&cratio(-2, 5)));
        for k in 1..4 {
            let psi = f.radial_solve(k);
            let back = psi.scale(&cratio(k as i64, 1)).add(&psi.euler());
            assert_eq!(back, f);
        }
    }
}
