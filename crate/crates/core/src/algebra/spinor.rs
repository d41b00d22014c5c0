use alloc::vec::Vec;

use num_complex::Complex;
use num_traits::Zero;

use super::{AlgebraError, GeneratorSpace, Multivector};
use crate::linalg::Mat;
use crate::scalar::{cratio, imag_unit, Real};

/// Spinor module `Λ(T*(0,1))` of complex dimension `2^n`.
///
/// Basis vectors are masks over `w̄¹..w̄ⁿ`; with the complex-bilinear pairing
///
/// ```text
/// c(e_{2j-1}) = w̄^j∧ − ι_j,     c(e_{2j}) = i (w̄^j∧ + ι_j),
/// ```
///
/// so every matrix entry lies in `ℤ[i]`.
#[derive(Debug, Clone)]
pub struct SpinorRep<T: Real = f64> {
    n: usize,
    gens: Vec<Mat<Complex<T>>>,
}

fn wedge_sign(mask: usize, j: usize) -> bool {
    (mask & ((1usize << j) - 1)).count_ones() % 2 == 1
}

impl<T: Real> SpinorRep<T> {
    pub fn new(n: usize) -> Self {
        let dim = 1usize << n;
        let mut gens = Vec::with_capacity(2 * n);
        for j in 0..n {
            let (ext, int) = Self::creation_annihilation(n, j);
            gens.push(ext.sub(&int));
            gens.push(ext.add(&int).scale(&imag_unit()));
        }
        debug_assert!(gens.iter().all(|g| g.rows() == dim));
        SpinorRep { n, gens }
    }

    /// Matrices of `w̄^j∧` and `ι_j`.
    fn creation_annihilation(n: usize, j: usize) -> (Mat<Complex<T>>, Mat<Complex<T>>) {
        let dim = 1usize << n;
        let mut ext = Mat::zeros(dim, dim);
        let mut int = Mat::zeros(dim, dim);
        let one: Complex<T> = cratio(1, 1);
        for m in 0..dim {
            let s = if wedge_sign(m, j) { -one.clone() } else { one.clone() };
            if m & (1 << j) == 0 {
                ext.set(m | (1 << j), m, s);
            } else {
                int.set(m & !(1 << j), m, s);
            }
        }
        (ext, int)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `c(e_v)` for a zero-based frame index.
    pub fn c(&self, v: usize) -> &Mat<Complex<T>> {
        &self.gens[v]
    }

    /// `c(v)` for a complex tangent vector given in the real frame.
    pub fn c_vec(&self, v: &[Complex<T>]) -> Mat<Complex<T>> {
        let mut out = Mat::zeros(self.dim(), self.dim());
        for (k, vk) in v.iter().enumerate() {
            out = out.add(&self.gens[k].scale(vk));
        }
        out
    }

    /// `c(v)` acting on a spinor, written as `Σ_j (v_{2j-1} + i v_{2j}) w̄^j∧ − (v_{2j-1} − i v_{2j}) ι_j`.
    pub fn complex_clifford(&self, v: &[Complex<T>], a: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), 2 * self.n, "tangent vector length");
        assert_eq!(a.len(), self.dim(), "spinor length");
        let i = imag_unit::<T>();
        let mut out = alloc::vec![Complex::zero(); self.dim()];
        for j in 0..self.n {
            let plus = v[2 * j].clone() + i.clone() * v[2 * j + 1].clone();
            let minus = v[2 * j].clone() - i.clone() * v[2 * j + 1].clone();
            for (m, am) in a.iter().enumerate() {
                if am.is_zero() {
                    continue;
                }
                let s = if wedge_sign(m, j) { -am.clone() } else { am.clone() };
                if m & (1 << j) == 0 {
                    out[m | (1 << j)] = out[m | (1 << j)].clone() + plus.clone() * s;
                } else {
                    out[m & !(1 << j)] = out[m & !(1 << j)].clone() - minus.clone() * s;
                }
            }
        }
        out
    }

    /// `c(e_{i1})⋯c(e_{ik})` for the frame bits of `mask`, in increasing order.
    pub fn monomial(&self, mask: u64) -> Mat<Complex<T>> {
        let mut out = Mat::identity(self.dim());
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            out = out.mul(&self.gens[v]);
        }
        out
    }

    /// Quantization map `σ⁻¹`: symbol to endomorphism of the spinors.
    pub fn quantize(&self, symbol: &Multivector<T>) -> Result<Mat<Complex<T>>, AlgebraError> {
        let space = symbol.space();
        if space.n_frame() != 2 * self.n {
            return Err(AlgebraError::SpaceMismatch);
        }
        if symbol.has_aux() {
            return Err(AlgebraError::AuxiliaryNotAllowed);
        }
        let mut out = Mat::zeros(self.dim(), self.dim());
        for (k, c) in symbol.terms() {
            out = out.add(&self.monomial(k).scale(c));
        }
        Ok(out)
    }

    /// Symbol map `σ`, via `a_I = 2^{−n} tr(c_I^{−1} A)`.
    pub fn symbol(&self, a: &Mat<Complex<T>>) -> Multivector<T> {
        let space = GeneratorSpace::frame(2 * self.n).expect("even frame");
        let mut out = Multivector::zero(space);
        let scale: Complex<T> = cratio(1, 1 << self.n);
        for mask in 0..(1u64 << (2 * self.n)) {
            // c_I^{-1} = (−1)^k c_{ik}⋯c_{i1}
            let mut inv = Mat::identity(self.dim());
            let mut bits = mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                inv = self.gens[v].neg().mul(&inv);
            }
            let coeff = inv.mul(a).trace() * scale.clone();
            out.add_term(mask, coeff);
        }
        out
    }

    /// Alternating trace over even minus odd form degree.
    pub fn supertrace(&self, a: &Mat<Complex<T>>) -> Complex<T> {
        let mut acc = Complex::zero();
        for m in 0..self.dim() {
            if m.count_ones() % 2 == 0 {
                acc = acc + a.get(m, m).clone();
            } else {
                acc = acc - a.get(m, m).clone();
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CliffordElement;
    use crate::scalar::Rational;

    type C = Complex<Rational>;

    fn ident(n: usize) -> Mat<C> {
        Mat::identity(n)
    }

    #[test]
    fn clifford_relation_matrices() {
        for n in 1..=3 {
            let rep = SpinorRep::<Rational>::new(n);
            for i in 0..2 * n {
                for j in 0..2 * n {
                    let anti = rep.c(i).mul(rep.c(j)).add(&rep.c(j).mul(rep.c(i)));
                    let expect = if i == j { ident(rep.dim()).scale(&cratio(-2, 1)) } else { Mat::zeros(rep.dim(), rep.dim()) };
                    assert_eq!(anti, expect);
                }
            }
        }
    }

    #[test]
    fn n1_c1_square_and_contraction_of_one() {
        let rep = SpinorRep::<Rational>::new(1);
        assert_eq!(rep.c(0).mul(rep.c(0)), ident(2).scale(&cratio(-1, 1)));
        // ω̄ ∝ e_1 + i e_2 acts by pure contraction
        let v = [cratio(1, 1), Complex::new(Rational::zero(), Rational::new(1, 1))];
        let out = rep.complex_clifford(&v, &[cratio(1, 1), Complex::zero()]);
        assert_eq!(out, alloc::vec![Complex::zero(), Complex::zero()]);
    }

    #[test]
    fn complex_clifford_matches_matrices() {
        let rep = SpinorRep::<Rational>::new(2);
        let v = [cratio(1, 2), cratio(-3, 1), Complex::new(Rational::new(2, 1), Rational::new(1, 3)), cratio(0, 1)];
        let a: Vec<C> = (0..4).map(|k| Complex::new(Rational::new(k as i128 + 1, 1), Rational::new(-1, k as i128 + 2))).collect();
        let m = rep.c_vec(&v);
        let expect: Vec<C> = (0..4).map(|i| (0..4).fold(Complex::zero(), |acc, j| acc + *m.get(i, j) * a[j])).collect();
        assert_eq!(rep.complex_clifford(&v, &a), expect);
    }

    #[test]
    fn quantize_symbol_roundtrip() {
        let rep = SpinorRep::<Rational>::new(2);
        let s = GeneratorSpace::frame(4).unwrap();
        let mut x = Multivector::zero(s);
        for mask in 0..16u64 {
            x.add_term(mask, Complex::new(Rational::new(mask as i128 - 7, 3), Rational::new(1, mask as i128 + 1)));
        }
        let q = rep.quantize(&x).unwrap();
        assert_eq!(rep.symbol(&q), x);
    }

    #[test]
    fn left_action_matches_clifford_symbol() {
        // Λ(V*) ≅ End(S): the 4×4 matrix of clifford_symbol(v, ·) is left
        // multiplication by c(e_v) after quantization.
        let rep = SpinorRep::<Rational>::new(1);
        let s = GeneratorSpace::frame(2).unwrap();
        for v in 0..2 {
            for mask in 0..4u64 {
                let a = Multivector::from_key(s, mask, cratio(1, 1));
                let lhs = rep.quantize(&a.clifford_symbol(v).unwrap()).unwrap();
                let rhs = rep.c(v).mul(&rep.quantize(&a).unwrap());
                assert_eq!(lhs, rhs, "v={v} mask={mask}");
            }
        }
    }

    #[test]
    fn symbolic_product_matches_matrix_product() {
        let rep = SpinorRep::<Rational>::new(2);
        let s = GeneratorSpace::frame(4).unwrap();
        for ka in 0..16u64 {
            for kb in [0u64, 3, 5, 6, 9, 15] {
                let a = CliffordElement::from_symbol(Multivector::from_key(s, ka, cratio(1, 1)), 1);
                let b = CliffordElement::from_symbol(Multivector::from_key(s, kb, cratio(1, 1)), 1);
                let ab = a.mul(&b).unwrap();
                let lhs = rep.quantize(ab.symbol()).unwrap();
                let rhs = rep.quantize(a.symbol()).unwrap().mul(&rep.quantize(b.symbol()).unwrap());
                assert_eq!(lhs, rhs);
                assert_eq!(ab.supertrace().unwrap(), rep.supertrace(&lhs));
            }
        }
    }
}
