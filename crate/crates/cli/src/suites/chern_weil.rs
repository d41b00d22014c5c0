//! Characteristic forms: multiplicativity (exact), the `σ_p` trace identity
//! and the dual-parameter derivative against a central difference.

use holotorsion_core::algebra::{GeneratorSpace, Multivector};
use holotorsion_core::chern_weil::{ahat, sigma_p_trace_identity_check, td_p_b_derivative_general, td_p_general, todd, trace_exp, FormMatrix};
use holotorsion_core::linalg::Mat;
use holotorsion_core::scalar::cratio;
use holotorsion_core::{Rational, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{rng, SuiteError};
use crate::config::RunConfig;
use crate::report::Case;

type Mv = Multivector<Rational>;

/// Random real 2-form with small rational coefficients.
fn two_form(space: GeneratorSpace, r: &mut ChaCha8Rng) -> Mv {
    let nf = space.n_frame();
    let mut x = Mv::zero(space);
    for i in 0..nf {
        for j in i + 1..nf {
            let c = r.gen_range(-3i64..=3);
            if c != 0 {
                x = x + (Mv::e(space, i) * Mv::e(space, j)).scale(&cratio(c, r.gen_range(1i64..=3)));
            }
        }
    }
    x
}

fn form_matrix(space: GeneratorSpace, dim: usize, r: &mut ChaCha8Rng) -> FormMatrix<Rational> {
    FormMatrix::from_fn(space, dim, |_, _| two_form(space, r))
}

/// Mismatches of `td(A⊕B) = td(A)td(B)`, `Â(A⊕B) = Â(A)Â(B)` and
/// `tr e^{A⊕B} = tr e^A + tr e^B`.
fn multiplicativity(r: &mut ChaCha8Rng, cases: usize) -> Result<usize, SuiteError> {
    let mut bad = 0;
    for k in 0..cases {
        let n = 1 + k % 3;
        let s = GeneratorSpace::frame(2 * n)?;
        let a = form_matrix(s, r.gen_range(1..=2), r);
        let b = form_matrix(s, r.gen_range(1..=2), r);
        let ab = a.direct_sum(&b);
        bad += usize::from(todd(&ab)? != todd(&a)? * todd(&b)?);
        bad += usize::from(ahat(&ab)? != ahat(&a)? * ahat(&b)?);
        bad += usize::from(trace_exp(&ab)? != trace_exp(&a)? + trace_exp(&b)?);
    }
    Ok(bad)
}

/// Largest relative mismatch of the `σ_p` trace identity, `n ≤ 4`, all `p`.
fn trace_identity(r: &mut ChaCha8Rng, cases: usize) -> Result<f64, SuiteError> {
    let mut worst: f64 = 0.0;
    for k in 0..cases {
        let n = 1 + k % 4;
        let a = Mat::from_fn(n, n, |_, _| C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        for p in 0..=n {
            let (lhs, rhs) = sigma_p_trace_identity_check(p, &a)?;
            worst = worst.max((lhs - rhs).norm() / rhs.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Largest coefficient gap between the exact `∂_b td_p(R + bU)` and a
/// central difference with step `1e−4`.
fn b_derivative(r: &mut ChaCha8Rng) -> Result<f64, SuiteError> {
    let mut worst: f64 = 0.0;
    let h = 1e-4;
    for dim in 1..=2 {
        let s = GeneratorSpace::frame(2 * dim)?;
        let num = Mat::from_fn(dim, dim, |i, j| C64::new(if i == j { 0.8 + 0.3 * i as f64 } else { 0.2 }, 0.1 * (i as f64 - j as f64)));
        let form = form_matrix(s, dim, r).to_f64();
        let r0 = FormMatrix::from_numeric(s, &num).add(&form);
        let u = FormMatrix::from_numeric(s, &Mat::from_fn(dim, dim, |i, j| C64::new(r.gen_range(-1.0..1.0), if i == j { 0.0 } else { 0.3 })));
        for p in 0..=dim {
            let exact = td_p_b_derivative_general(p, &r0, &u)?;
            let plus = td_p_general(p, &r0.add(&u.scale(&C64::new(h, 0.0))))?;
            let minus = td_p_general(p, &r0.sub(&u.scale(&C64::new(h, 0.0))))?;
            let fd = (plus - minus).scale(&C64::new(0.5 / h, 0.0));
            worst = worst.max((exact - fd).max_abs_coeff());
        }
    }
    Ok(worst)
}

pub fn run(config: &RunConfig) -> Result<Vec<Case>, SuiteError> {
    let tol = &config.tolerances;
    let seed = config.seed;
    Ok(vec![
        Case::check("multiplicativity_mismatches", multiplicativity(&mut rng(seed, 10), 24)? as f64, 0.0, 0.0, "td, A-hat multiplicative; tr exp additive"),
        Case::check("sigma_p_trace_identity", trace_identity(&mut rng(seed, 11), 60)?, 0.0, tol.get("chern_weil.trace_identity"), "sigma_p(exp A) trace identity"),
        Case::check("b_derivative_vs_central_difference", b_derivative(&mut rng(seed, 12))?, 0.0, tol.get("chern_weil.b_derivative"), "d/db td_p(R + bU) at b = 0"),
    ])
}
