//! Exact Taylor coefficients of the scalar functions behind the
//! characteristic forms and the Mehler kernel.
//!
//! All coefficients are rationals built from Bernoulli numbers. `i128`
//! arithmetic keeps them exact up to order [`MAX_ORDER`].

use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::Rational;

/// Highest order for which the factorials still fit in `i128`.
pub const MAX_ORDER: usize = 30;

pub fn factorial(k: usize) -> Rational {
    assert!(k <= 33, "factorial overflow");
    Rational::from_integer((1..=k as i128).product())
}

fn binomial(n: usize, k: usize) -> i128 {
    let mut out: i128 = 1;
    for i in 0..k {
        out = out * (n - i) as i128 / (i + 1) as i128;
    }
    out
}

/// `B_0..=B_k` with `B_1 = −1/2`.
pub fn bernoulli(k: usize) -> Vec<Rational> {
    assert!(k <= MAX_ORDER, "Bernoulli order too high");
    let mut b = vec![Rational::from_integer(0); k + 1];
    b[0] = Rational::from_integer(1);
    for m in 1..=k {
        let mut acc = Rational::from_integer(0);
        for (j, bj) in b.iter().enumerate().take(m) {
            acc += Rational::from_integer(binomial(m + 1, j)) * bj;
        }
        b[m] = -acc / Rational::from_integer(m as i128 + 1);
    }
    b
}

/// `exp(x)` to `x^order`.
pub fn exp_coeffs(order: usize) -> Vec<Rational> {
    (0..=order).map(|k| Rational::from_integer(1) / factorial(k)).collect()
}

/// `x/(e^x − 1) = Σ B_k x^k / k!`.
pub fn x_over_expm1_coeffs(order: usize) -> Vec<Rational> {
    bernoulli(order).into_iter().enumerate().map(|(k, b)| b / factorial(k)).collect()
}

/// `log((x/2)/sinh(x/2)) = −Σ_{k≥1} B_{2k} x^{2k} / (2k (2k)!)`.
pub fn log_half_x_over_sinh_coeffs(order: usize) -> Vec<Rational> {
    let b = bernoulli(order);
    (0..=order)
        .map(|k| {
            if k == 0 || k % 2 == 1 {
                Rational::from_integer(0)
            } else {
                -b[k] / (Rational::from_integer(k as i128) * factorial(k))
            }
        })
        .collect()
}

/// `log(x/(e^x − 1)) = −x/2 + log((x/2)/sinh(x/2))`.
pub fn log_x_over_expm1_coeffs(order: usize) -> Vec<Rational> {
    let mut c = log_half_x_over_sinh_coeffs(order);
    if order >= 1 {
        c[1] = Rational::new(-1, 2);
    }
    c
}

/// `(z/2) coth(z/2) = Σ_{k≥0} B_{2k} z^{2k} / (2k)!`.
pub fn half_z_coth_coeffs(order: usize) -> Vec<Rational> {
    let b = bernoulli(order);
    (0..=order)
        .map(|k| if k % 2 == 1 { Rational::from_integer(0) } else { b[k] / factorial(k) })
        .collect()
}

/// Multiply two truncated series.
pub fn mul_series(a: &[Rational], b: &[Rational], order: usize) -> Vec<Rational> {
    let mut out = vec![Rational::from_integer(0); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// `exp` of a series with zero constant term.
pub fn exp_series(a: &[Rational], order: usize) -> Vec<Rational> {
    assert!(a.first().is_none_or(|c| *c == Rational::from_integer(0)), "constant term must vanish");
    let mut out = vec![Rational::from_integer(0); order + 1];
    out[0] = Rational::from_integer(1);
    let mut power = out.clone();
    for k in 1..=order {
        power = mul_series(&power, a, order);
        let f = factorial(k);
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p / f;
        }
    }
    out
}

pub fn to_f64(c: &[Rational]) -> Vec<f64> {
    c.iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[1], r(-1, 2));
        assert_eq!(b[2], r(1, 6));
        assert_eq!(b[3], r(0, 1));
        assert_eq!(b[4], r(-1, 30));
        assert_eq!(b[12], r(-691, 2730));
        assert_eq!(bernoulli(30)[30], r(8615841276005, 14322));
    }

    #[test]
    fn todd_scalar_series() {
        let c = x_over_expm1_coeffs(4);
        assert_eq!(c, alloc::vec![r(1, 1), r(-1, 2), r(1, 12), r(0, 1), r(-1, 720)]);
        // exp(log(x/(e^x−1))) returns the same series
        assert_eq!(exp_series(&log_x_over_expm1_coeffs(10), 10), x_over_expm1_coeffs(10));
    }

    #[test]
    fn coth_series_against_division() {
        // (z/2)coth(z/2) = (z/2)(e^z+1)/(e^z−1) = z/(e^z−1) + z/2
        let mut c = x_over_expm1_coeffs(12);
        c[1] += r(1, 2);
        assert_eq!(c, half_z_coth_coeffs(12));
    }
}
