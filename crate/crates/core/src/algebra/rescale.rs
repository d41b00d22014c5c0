use num_complex::Complex;

use super::{AlgebraError, Multivector};
use crate::scalar::{cre, Real};

fn pow_real<T: Real>(x: &T, k: u32) -> T {
    let mut out = T::one();
    for _ in 0..k {
        out = out * x.clone();
    }
    out
}

/// `ψ_t` given `√t`: every auxiliary parameter is divided by `√t`.
pub fn psi_t_sqrt<T: Real>(a: &Multivector<T>, sqrt_t: T) -> Result<Multivector<T>, AlgebraError> {
    if !(sqrt_t > T::zero()) {
        return Err(AlgebraError::NonPositiveParameter);
    }
    let space = a.space();
    Ok(a.map_coeffs(|k, c| {
        let d = space.aux_degree(k);
        c.clone() / cre(pow_real(&sqrt_t, d))
    }))
}

/// `ψ_t` on float multivectors.
pub fn psi_t(a: &Multivector<f64>, t: f64) -> Result<Multivector<f64>, AlgebraError> {
    if !(t > 0.0) {
        return Err(AlgebraError::NonPositiveParameter);
    }
    psi_t_sqrt(a, num_traits::Float::sqrt(t))
}

/// Getzler rescaling `(δ_ε f)(t, x) = Σ_i ε^{−i} f(ε² t, ε x)_{[i]}`, where
/// `[i]` is the frame degree.
pub fn getzler_rescale<T, F>(eps: T, f: F) -> Result<impl Fn(T, &[T]) -> Multivector<T>, AlgebraError>
where
    T: Real,
    F: Fn(T, &[T]) -> Multivector<T>,
{
    if !(eps > T::zero()) {
        return Err(AlgebraError::NonPositiveParameter);
    }
    Ok(move |t: T, x: &[T]| {
        let xs: alloc::vec::Vec<T> = x.iter().map(|xi| xi.clone() * eps.clone()).collect();
        let value = f(eps.clone() * eps.clone() * t, &xs);
        let space = value.space();
        value.map_coeffs(|k, c| {
            let d = space.frame_degree(k);
            c.clone() / Complex::new(pow_real(&eps, d), T::zero())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Generator, GeneratorSpace};
    use crate::scalar::{cratio, Rational};

    type Mv = Multivector<Rational>;

    #[test]
    fn psi_on_thetas() {
        let s = GeneratorSpace::new(2, 2, false, 2).unwrap();
        let th1 = Mv::generator(s, Generator::Theta(0)).unwrap();
        let th2 = Mv::generator(s, Generator::Theta(1)).unwrap();
        let r = Rational::new(3, 1);
        assert_eq!(psi_t_sqrt(&th1, r).unwrap(), th1.scale(&cratio(1, 3)));
        assert_eq!(psi_t_sqrt(&(th1.clone() * th2.clone()), r).unwrap(), (th1.clone() * th2).scale(&cratio(1, 9)));
        assert_eq!(psi_t_sqrt(&th1, Rational::new(1, 1)).unwrap(), th1);
        assert!(psi_t_sqrt(&th1, Rational::new(0, 1)).is_err());
        assert!(psi_t(&th1.to_f64(), -1.0).is_err());
    }

    #[test]
    fn getzler_scales_frame_degree() {
        let s = GeneratorSpace::frame(2).unwrap();
        let f = move |_t: Rational, _x: &[Rational]| Mv::e(s, 0) + Mv::scalar(s, cratio(5, 1));
        let g = getzler_rescale(Rational::new(2, 1), f).unwrap();
        let v = g(Rational::new(1, 1), &[]);
        assert_eq!(v, Mv::e(s, 0).scale(&cratio(1, 2)) + Mv::scalar(s, cratio(5, 1)));
    }
}
