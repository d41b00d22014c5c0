//! The rescaled limit operator `Ĵ₀ = −t Σ_i (∂_i + ¼ B_ij x^j)² + tL` and the
//! conjugation that removes the singular terms of the rescaled operator.

use alloc::vec::Vec;

use num_complex::Complex;

use super::{FiberMat, FiberPoly, ParametrixError};
use crate::algebra::{AlgebraError, Generator, GeneratorSpace, Multivector};
use crate::chern_weil::{complex_structure, realify, CurvatureData, FormMatrix};
use crate::linalg::Mat;
use crate::mehler::MehlerParams;
use crate::poly::Poly;
use crate::scalar::{cratio, cre, imag_unit, Real, Ring};

fn check_sqrt<T: Real>(t: &T, sqrt_2t: &T) -> Result<(), ParametrixError> {
    if !(t.clone() > T::zero()) || !(sqrt_2t.clone() > T::zero()) {
        return Err(ParametrixError::NonPositive);
    }
    let two_t = (t.clone() + t.clone()).to_f64();
    let sq = (sqrt_2t.clone() * sqrt_2t.clone()).to_f64();
    if (sq - two_t).abs() > 1e-12 * two_t {
        return Err(ParametrixError::Shape);
    }
    Ok(())
}

fn gen<T: Real>(space: GeneratorSpace, g: Generator) -> Result<Multivector<T>, ParametrixError> {
    Ok(Multivector::generator(space, g)?)
}

/// `B` and `L` of `Ĵ₀` at time `t`, given `√(2t)`:
///
/// `B_ij = Ω_ij − √(2/t)·i·dā (∇_{∂_j}Θ̇)(e_k, ∂_i) e^k − (i/t) da dā Θ̇(∂_i, ∂_j)`
///
/// `tL = −¼ da dā Θ̇(e_i, Je_i) + ¼√(t/2) dā (∇_{e_i}Θ̇)(e_j, Je_j) e^i + t F`
///
/// where `Ω = realify(R⁺)` is the curvature matrix in the real frame and
/// `F = ½ tr R⁺ + R^𝓔` as a 2-form. `a₀ = I`.
pub fn assemble_j0<T: Real>(curv: &CurvatureData<T>, t: &T, sqrt_2t: &T) -> Result<MehlerParams<T>, ParametrixError> {
    check_sqrt(t, sqrt_2t)?;
    let space = curv.r_plus.space();
    let n = curv.complex_dim();
    let nr = 2 * n;
    let m = curv.r_e.dim();
    let grads_zero = curv.theta_dot_grad.iter().all(|g| g.is_zero());
    let needs_aux = !curv.theta_dot.is_zero() || !grads_zero;
    if needs_aux && !space.has_da_dabar() {
        return Err(AlgebraError::MissingGenerator(Generator::Da).into());
    }
    let i = imag_unit::<T>();
    let omega = realify(&curv.r_plus);
    let mut b = omega.clone();
    let mut tl_scalar = curv.r_plus.trace().scale(&(cratio::<T>(1, 2) * cre(t.clone())));
    if needs_aux {
        let da = gen::<T>(space, Generator::Da)?;
        let dab = gen::<T>(space, Generator::DaBar)?;
        let bb = da.wedge(&dab)?;
        let inv_t = cre(T::one() / t.clone());
        // √(2/t) = 2/√(2t), √(t/2) = √(2t)/2
        let sqrt_2_over_t = cre(T::from_ratio(2, 1) / sqrt_2t.clone());
        let sqrt_t_over_2 = cre(sqrt_2t.clone() / T::from_ratio(2, 1));
        let dab_e: Vec<Multivector<T>> = (0..nr).map(|k| dab.wedge(&Multivector::e(space, k))).collect::<Result<_, _>>()?;
        for r in 0..nr {
            for c in 0..nr {
                let mut entry = b.get(r, c).plus(&bb.scale(&(-(i.clone() * inv_t.clone()) * curv.theta_dot.get(r, c).clone())));
                if !grads_zero {
                    for (k, de) in dab_e.iter().enumerate() {
                        let g = curv.theta_dot_grad[c].get(k, r).clone();
                        entry = entry.plus(&de.scale(&(-(sqrt_2_over_t.clone() * i.clone()) * g)));
                    }
                }
                b.set(r, c, entry);
            }
        }
        tl_scalar = tl_scalar.plus(&bb.scale(&(cratio::<T>(-1, 4) * curv.theta_dot_trace_j())));
        if !grads_zero {
            let j = complex_structure::<T>(n);
            for (a, de) in dab_e.iter().enumerate() {
                let mut s = Complex::new(T::zero(), T::zero());
                for jj in 0..nr {
                    for k in 0..nr {
                        s = s + curv.theta_dot_grad[a].get(jj, k).clone() * j.get(k, jj).clone();
                    }
                }
                tl_scalar = tl_scalar.plus(&de.scale(&(cratio::<T>(1, 4) * sqrt_t_over_2.clone() * s)));
            }
        }
    }
    let tl = FormMatrix::identity(space, m).times_form(&tl_scalar).add(&curv.r_e.scale(&cre(t.clone())));
    let l = tl.scale(&cre(T::one() / t.clone()));
    Ok(MehlerParams::new(b, l, Mat::identity(m))?)
}

/// [`assemble_j0`] with `√(2t)` computed in floating point.
pub fn assemble_j0_f64(curv: &CurvatureData<f64>, t: f64) -> Result<MehlerParams<f64>, ParametrixError> {
    assemble_j0(curv, &t, &num_traits::Float::sqrt(2.0 * t))
}

/// `A(x, ε) = ε^{−1}/(2√(2t)) Σ_i x^i (da e^i + i Σ_k Θ̇(e_k, ∂_i) dā e^k)` on a
/// flat model, as a polynomial in `x`.
fn conjugation_exponent<T: Real>(theta_dot: &Mat<Complex<T>>, space: GeneratorSpace, sqrt_2t: &T, eps: &T) -> Result<Poly<Multivector<T>>, ParametrixError> {
    let nr = theta_dot.rows();
    let da = gen::<T>(space, Generator::Da)?;
    let dab = gen::<T>(space, Generator::DaBar)?;
    let kappa = cre(T::one() / (eps.clone() * T::from_ratio(2, 1) * sqrt_2t.clone()));
    let zero = Multivector::zero(space);
    let mut a = Poly::zero(nr, &zero);
    for idx in 0..nr {
        let mut coef = da.wedge(&Multivector::e(space, idx))?;
        for k in 0..nr {
            let w = dab.wedge(&Multivector::e(space, k))?;
            coef = coef.plus(&w.scale(&(imag_unit::<T>() * theta_dot.get(k, idx).clone())));
        }
        let mut e = alloc::vec![0u8; nr];
        e[idx] = 1;
        a.add_term(e, coef.scale(&kappa));
    }
    Ok(a)
}

fn poly_exp<T: Real>(a: &Poly<Multivector<T>>, sign: i64) -> Poly<Multivector<T>> {
    let one = Poly::constant(a.nvars(), Multivector::one(a.zero_coeff().space()));
    let mut out = one.clone();
    let mut term = one;
    for k in 1.. {
        term = term.mul(a).scale(&cratio(sign, k));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

/// `h = exp(−A(x, ε))` evaluated at `x`.
pub fn conjugation_h<T: Real>(theta_dot: &Mat<Complex<T>>, space: GeneratorSpace, sqrt_2t: &T, eps: &T, x: &[T]) -> Result<Multivector<T>, ParametrixError> {
    Ok(poly_exp(&conjugation_exponent(theta_dot, space, sqrt_2t, eps)?, -1).eval(x))
}

/// Rescaled operator `Î_ε` of a flat model with constant `Θ̇` and twisting
/// 2-form `F`, acting on polynomial test sections with values in
/// `Λ ⊗ End(𝓔) ⊗ R(da, dā)`.
#[derive(Debug, Clone)]
pub struct RescaledFlatOperator<T: Real = f64> {
    space: GeneratorSpace,
    t: T,
    sqrt_2t: T,
    theta_dot: Mat<Complex<T>>,
    f_form: FormMatrix<T>,
}

fn wedge_left<T: Real>(p: &FiberPoly<T>, g: &Multivector<T>) -> FiberPoly<T> {
    p.map(|c| c.map(|e| g.times(e)))
}

fn interior<T: Real>(p: &FiberPoly<T>, k: usize) -> FiberPoly<T> {
    p.map(|c| c.map(|e| e.interior(k).expect("frame index")))
}

impl<T: Real> RescaledFlatOperator<T> {
    /// Flat curvature data (`R⁺ = 0`, `∇Θ̇ = 0`); `F = R^𝓔`.
    pub fn new(curv: &CurvatureData<T>, t: T, sqrt_2t: T) -> Result<Self, ParametrixError> {
        check_sqrt(&t, &sqrt_2t)?;
        if !curv.r_plus.is_zero() || curv.theta_dot_grad.iter().any(|g| !g.is_zero()) {
            return Err(ParametrixError::NotConstant);
        }
        let space = curv.r_plus.space();
        if !space.has_da_dabar() {
            return Err(AlgebraError::MissingGenerator(Generator::Da).into());
        }
        Ok(RescaledFlatOperator { space, t, sqrt_2t, theta_dot: curv.theta_dot.clone(), f_form: curv.r_e.clone() })
    }

    fn dim(&self) -> usize {
        self.theta_dot.rows()
    }

    /// `ε^{−1} e^k∧ − ε i_{e_k}`.
    fn c_eps(&self, p: &FiberPoly<T>, k: usize, eps: &T) -> FiberPoly<T> {
        let ek = Multivector::e(self.space, k);
        wedge_left(p, &ek).scale(&cre(T::one() / eps.clone())).sub(&interior(p, k).scale(&cre(eps.clone())))
    }

    /// `ε D_i`.
    fn e_op(&self, p: &FiberPoly<T>, idx: usize, eps: &T) -> FiberPoly<T> {
        let da = gen::<T>(self.space, Generator::Da).expect("checked");
        let dab = gen::<T>(self.space, Generator::DaBar).expect("checked");
        let kappa = cre(T::one() / (T::from_ratio(2, 1) * self.sqrt_2t.clone()));
        let mut out = p.deriv(idx);
        out = out.sub(&wedge_left(&self.c_eps(p, idx, eps), &da).scale(&kappa));
        let mut acc = Poly::zero(p.nvars(), p.zero_coeff());
        for k in 0..self.dim() {
            let th = self.theta_dot.get(k, idx).clone();
            acc = acc.add(&self.c_eps(p, k, eps).scale(&th));
        }
        out.sub(&wedge_left(&acc, &dab).scale(&(imag_unit::<T>() * kappa)))
    }

    /// `F(e_i, e_j)` as a fiber matrix of scalars.
    fn f_component(&self, i: usize, j: usize) -> FiberMat<T> {
        let key = (1u64 << i) | (1u64 << j);
        let sign: i64 = if i < j { 1 } else { -1 };
        self.f_form.as_mat().map(|e| {
            if i == j {
                Multivector::zero(self.space)
            } else {
                Multivector::scalar(self.space, e.coeff(key) * cratio::<T>(sign, 1))
            }
        })
    }

    /// `Î_ε φ`.
    pub fn apply(&self, p: &FiberPoly<T>, eps: &T) -> FiberPoly<T> {
        let nr = self.dim();
        let t = cre(self.t.clone());
        let mut out = Poly::zero(p.nvars(), p.zero_coeff());
        for idx in 0..nr {
            out = out.sub(&self.e_op(&self.e_op(p, idx, eps), idx, eps).scale(&t));
        }
        let da = gen::<T>(self.space, Generator::Da).expect("checked");
        let dab = gen::<T>(self.space, Generator::DaBar).expect("checked");
        let bb = da.times(&dab);
        let j = complex_structure::<T>(nr / 2);
        let mut tr = Complex::new(T::zero(), T::zero());
        for a in 0..nr {
            for k in 0..nr {
                tr = tr + self.theta_dot.get(a, k).clone() * j.get(k, a).clone();
            }
        }
        out = out.add(&wedge_left(p, &bb).scale(&(cratio::<T>(-1, 4) * tr)));
        let coef = t * cre(eps.clone() * eps.clone()) * cratio::<T>(1, 2);
        for a in 0..nr {
            for b in 0..nr {
                if a == b {
                    continue;
                }
                let cc = self.c_eps(&self.c_eps(p, b, eps), a, eps);
                out = out.add(&cc.left_mul(&self.f_component(a, b)).scale(&coef));
            }
        }
        out
    }

    fn lift(&self, h: &Poly<Multivector<T>>, m: usize) -> FiberPoly<T> {
        let id: FiberMat<T> = Mat::identity_like(m, &Multivector::zero(self.space));
        h.map_into(&id, |c| id.left_mul_elem(c))
    }

    /// `Ĵ_ε φ = h Î_ε (h^{−1} φ)` with `h = exp(−A(x, ε))`.
    pub fn apply_conjugated(&self, p: &FiberPoly<T>, eps: &T) -> Result<FiberPoly<T>, ParametrixError> {
        let a = conjugation_exponent(&self.theta_dot, self.space, &self.sqrt_2t, eps)?;
        let m = p.zero_coeff().rows();
        let h = self.lift(&poly_exp(&a, -1), m);
        let h_inv = self.lift(&poly_exp(&a, 1), m);
        Ok(h.mul(&self.apply(&h_inv.mul(p), eps)))
    }

    /// `Ĵ₀ φ = −t Σ_i (∂_i + ¼ B_ij x^j)² φ + tL φ`.
    pub fn apply_limit(&self, params: &MehlerParams<T>, p: &FiberPoly<T>) -> FiberPoly<T> {
        let nr = self.dim();
        let t = cre(self.t.clone());
        let b = params.b();
        let cov = |idx: usize, q: &FiberPoly<T>| {
            let mut out = q.deriv(idx);
            for jx in 0..nr {
                out = out.add(&wedge_left(&q.mul_var(jx), b.get(idx, jx)).scale(&cratio(1, 4)));
            }
            out
        };
        let mut out = Poly::zero(p.nvars(), p.zero_coeff());
        for idx in 0..nr {
            out = out.sub(&cov(idx, &cov(idx, p)).scale(&t));
        }
        out.add(&p.left_mul(params.l().as_mat()).scale(&t))
    }
}
