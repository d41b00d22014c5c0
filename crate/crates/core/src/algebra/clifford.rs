use num_complex::Complex;
use num_traits::{One, Zero};

use super::{AlgebraError, Generator, GeneratorSpace, Multivector};
use crate::scalar::{cre, imag_unit, Real};

/// Element of `C(V*) ⊗ End(W)` stored through its symbol.
///
/// Coefficients are scalars, so the `End(W)` part is a multiple of the
/// identity and only its dimension `w_dim` matters for traces.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement<T: Real = f64> {
    symbol: Multivector<T>,
    w_dim: usize,
}

impl<T: Real> CliffordElement<T> {
    pub fn from_symbol(symbol: Multivector<T>, w_dim: usize) -> Self {
        CliffordElement { symbol, w_dim }
    }

    pub fn one(space: GeneratorSpace, w_dim: usize) -> Self {
        Self::from_symbol(Multivector::one(space), w_dim)
    }

    /// `c(e_v)`, whose symbol is `e^v`.
    pub fn c(space: GeneratorSpace, v: usize, w_dim: usize) -> Result<Self, AlgebraError> {
        Ok(Self::from_symbol(Multivector::generator(space, Generator::Frame(v))?, w_dim))
    }

    pub fn symbol(&self) -> &Multivector<T> {
        &self.symbol
    }

    pub fn w_dim(&self) -> usize {
        self.w_dim
    }

    pub fn space(&self) -> GeneratorSpace {
        self.symbol.space()
    }

    /// Clifford product, computed on symbols:
    /// `σ(a·b) = Σ_I a_I c(e^{i1})⋯c(e^{ik}) (ϑ^K ∧ σ(b))`.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        let space = self.space();
        if space != other.space() {
            return Err(AlgebraError::SpaceMismatch);
        }
        let frame = space.frame_mask();
        let mut out = Multivector::zero(space);
        for (key, coeff) in self.symbol.terms() {
            let mut x = Multivector::from_key(space, key & !frame, coeff.clone()).wedge(&other.symbol)?;
            let mut bits = key & frame;
            while bits != 0 {
                let v = 63 - bits.leading_zeros();
                bits &= !(1u64 << v);
                x = x.clifford_symbol(v as usize)?;
            }
            out = out.try_add(&x)?;
        }
        Ok(Self::from_symbol(out, self.w_dim))
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(Self::from_symbol(self.symbol.try_add(&other.symbol)?, self.w_dim))
    }

    pub fn scale(&self, c: &Complex<T>) -> Self {
        Self::from_symbol(self.symbol.scale(c), self.w_dim)
    }

    /// `(−2i)^n · w_dim`, the supertrace of `c(e_1)⋯c(e_{2n})` on `S ⊗ W`.
    fn top_factor(&self) -> Complex<T> {
        let n = self.space().complex_dim();
        let m2i = -(imag_unit::<T>() + imag_unit::<T>());
        let mut f: Complex<T> = Complex::one();
        for _ in 0..n {
            f = f * m2i.clone();
        }
        let mut w = T::zero();
        for _ in 0..self.w_dim {
            w = w + T::one();
        }
        f * cre(w)
    }

    /// Supertrace with the auxiliary parameters kept: the top-frame component
    /// of the symbol times `(−2i)^n w_dim`, as an element of the auxiliary
    /// algebra.
    pub fn berezin(&self) -> Multivector<T> {
        let space = self.space();
        let top = space.top_frame();
        let factor = self.top_factor();
        let mut out = Multivector::zero(space);
        for (key, c) in self.symbol.terms() {
            if key & space.frame_mask() == top {
                out.add_term(key & !top, c.clone() * factor.clone());
            }
        }
        out
    }

    pub fn supertrace(&self) -> Result<Complex<T>, AlgebraError> {
        let b = self.berezin();
        if b.has_aux() {
            return Err(AlgebraError::AuxiliaryNotAllowed);
        }
        Ok(if b.is_zero() { Complex::zero() } else { b.scalar_part() })
    }
}
