//! Exact rational checks of the graded algebra on seeded random inputs.

use holotorsion_core::algebra::{getzler_rescale, psi_t_sqrt, CliffordElement, GeneratorSpace, Multivector, SpinorRep};
use holotorsion_core::scalar::{cratio, imag_unit};
use holotorsion_core::Rational;
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{rng, SuiteError};
use crate::config::RunConfig;
use crate::report::Case;

type Q = Complex<Rational>;
type Mv = Multivector<Rational>;

fn real_coeff(r: &mut ChaCha8Rng) -> Q {
    cratio(r.gen_range(-6..=6), r.gen_range(1..=4))
}

fn coeff(r: &mut ChaCha8Rng) -> Q {
    real_coeff(r) + real_coeff(r) * imag_unit::<Rational>()
}

/// Random element with keys in `mask`, restricted to degree parity `parity`
/// when given.
fn element(r: &mut ChaCha8Rng, space: GeneratorSpace, mask: u64, parity: Option<u32>, terms: usize) -> Mv {
    let mut m = Mv::zero(space);
    for _ in 0..terms {
        let key = r.gen::<u64>() & mask;
        let c = coeff(r);
        if parity.is_none_or(|p| key.count_ones() % 2 == p) {
            m.add_term(key, c);
        }
    }
    m
}

fn clifford_vector(space: GeneratorSpace, v: &[Q]) -> Result<CliffordElement<Rational>, SuiteError> {
    let mut out = CliffordElement::from_symbol(Mv::zero(space), 1);
    for (i, c) in v.iter().enumerate() {
        out = out.add(&CliffordElement::c(space, i, 1)?.scale(c))?;
    }
    Ok(out)
}

/// `c(v)c(w) + c(w)c(v) = −2⟨v, w⟩`.
fn clifford_relation(r: &mut ChaCha8Rng, cases: usize) -> Result<usize, SuiteError> {
    let mut bad = 0;
    for _ in 0..cases {
        let n = r.gen_range(1..=4);
        let space = GeneratorSpace::frame(2 * n)?;
        let v: Vec<Q> = (0..2 * n).map(|_| real_coeff(r)).collect();
        let w: Vec<Q> = (0..2 * n).map(|_| real_coeff(r)).collect();
        let (cv, cw) = (clifford_vector(space, &v)?, clifford_vector(space, &w)?);
        let anti = cv.mul(&cw)?.add(&cw.mul(&cv)?)?;
        let dot: Q = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let want = Mv::scalar(space, dot * cratio::<Rational>(-2, 1));
        bad += usize::from(!(anti.symbol().clone() - want).is_zero());
    }
    Ok(bad)
}

/// Symbolic supertrace against the matrix supertrace on spinors, and the
/// top-monomial rule `str = (−2i)ⁿ · rank`.
fn supertrace_rules(r: &mut ChaCha8Rng, cases: usize) -> Result<(usize, usize), SuiteError> {
    let (mut bad_matrix, mut bad_top) = (0, 0);
    for _ in 0..cases {
        let n = r.gen_range(1..=3);
        let space = GeneratorSpace::frame(2 * n)?;
        let rank = r.gen_range(1..=3);
        let x = element(r, space, space.frame_mask(), None, 12);
        let symbolic = CliffordElement::from_symbol(x.clone(), rank).supertrace()?;
        let rep = SpinorRep::<Rational>::new(n);
        let matrix = rep.supertrace(&rep.quantize(&x)?) * cratio::<Rational>(rank as i64, 1);
        bad_matrix += usize::from(symbolic != matrix);
        let c = coeff(r);
        let top = CliffordElement::from_symbol(Mv::from_key(space, space.top_frame(), c), rank).supertrace()?;
        let mut want = c * cratio::<Rational>(rank as i64, 1);
        for _ in 0..n {
            want = want * imag_unit::<Rational>() * cratio::<Rational>(-2, 1);
        }
        bad_top += usize::from(top != want);
    }
    Ok((bad_matrix, bad_top))
}

/// `str[xy] = (−1)^{|x||y|} str[yx]` for homogeneous `x`, `y`.
fn graded_trace(r: &mut ChaCha8Rng, cases: usize) -> Result<usize, SuiteError> {
    let mut bad = 0;
    for _ in 0..cases {
        let n = r.gen_range(1..=3);
        let space = GeneratorSpace::frame(2 * n)?;
        let (px, py) = (r.gen_range(0..2u32), r.gen_range(0..2u32));
        let rank = r.gen_range(1..=3);
        let x = CliffordElement::from_symbol(element(r, space, space.frame_mask(), Some(px), 10), rank);
        let y = CliffordElement::from_symbol(element(r, space, space.frame_mask(), Some(py), 10), rank);
        let xy = x.mul(&y)?.supertrace()?;
        let yx = y.mul(&x)?.supertrace()?;
        let sign = if px * py == 1 { cratio::<Rational>(-1, 1) } else { cratio(1, 1) };
        bad += usize::from(xy != yx * sign);
    }
    Ok(bad)
}

fn random_positive(r: &mut ChaCha8Rng) -> Rational {
    Rational::new(r.gen_range(1..=5), r.gen_range(1..=5))
}

/// `ψ_t(xy) = ψ_t(x)ψ_t(y)` and `ψ_s ψ_t = ψ_{st}` in parameters `√t`.
fn psi_t_rules(r: &mut ChaCha8Rng, cases: usize) -> Result<(usize, usize), SuiteError> {
    let space = GeneratorSpace::new(2, 3, true, 63)?;
    let all = (1u64 << space.n_generators()) - 1;
    let (mut bad_mul, mut bad_comp) = (0, 0);
    for _ in 0..cases {
        let x = element(r, space, all, None, 10);
        let y = element(r, space, all, None, 10);
        let (s, s2) = (random_positive(r), random_positive(r));
        let lhs = psi_t_sqrt(&x.wedge(&y)?, s)?;
        let rhs = psi_t_sqrt(&x, s)?.wedge(&psi_t_sqrt(&y, s)?)?;
        bad_mul += usize::from(lhs != rhs);
        let twice = psi_t_sqrt(&psi_t_sqrt(&x, s)?, s2)?;
        bad_comp += usize::from(twice != psi_t_sqrt(&x, s * s2)?);
    }
    Ok((bad_mul, bad_comp))
}

/// `δ_ε δ_ε′ = δ_{εε′}` on polynomial families of forms.
fn getzler_composition(r: &mut ChaCha8Rng, cases: usize) -> Result<usize, SuiteError> {
    let space = GeneratorSpace::frame(4)?;
    let mut bad = 0;
    for _ in 0..cases {
        let coeffs: Vec<i128> = (0..64).map(|_| r.gen_range(-5..=5)).collect();
        // f(t, x) = Σ_key (c₀ + c₁t + c₂x₀x₁ + c₃x₁t²) e^key over 16 keys
        let f = move |t: Rational, x: &[Rational]| {
            let mut m = Mv::zero(space);
            for key in 0u64..16 {
                let b = 4 * key as usize;
                let i = Rational::from_integer;
                let val = i(coeffs[b]) + i(coeffs[b + 1]) * t + i(coeffs[b + 2]) * x[0] * x[1] + i(coeffs[b + 3]) * x[1] * t * t;
                m.add_term(key, Q::new(val, Rational::from_integer(0)));
            }
            m
        };
        let (e1, e2) = (random_positive(r), random_positive(r));
        let composed = getzler_rescale(e1, getzler_rescale(e2, f.clone())?)?;
        let direct = getzler_rescale(e1 * e2, f)?;
        let t = Rational::new(r.gen_range(1..=4), r.gen_range(1..=3));
        let x = [Rational::new(r.gen_range(-3..=3), r.gen_range(1..=3)), Rational::new(r.gen_range(-3..=3), r.gen_range(1..=3))];
        bad += usize::from(composed(t, &x) != direct(t, &x));
    }
    Ok(bad)
}

pub fn run(config: &RunConfig) -> Result<Vec<Case>, SuiteError> {
    let n = config.cases;
    let seed = config.seed;
    let exact = |name: &str, bad: usize, anchor: &str| Case::check(name, bad as f64, 0.0, 0.0, anchor);
    let (st_matrix, st_top) = supertrace_rules(&mut rng(seed, 1), n)?;
    let (psi_mul, psi_comp) = psi_t_rules(&mut rng(seed, 3), n)?;
    Ok(vec![
        exact("clifford_relation_mismatches", clifford_relation(&mut rng(seed, 0), n)?, "c(u)c(v)+c(v)c(u) = -2<u,v>"),
        exact("supertrace_vs_spinor_matrix_mismatches", st_matrix, "str[a] = matrix supertrace on spinors"),
        exact("supertrace_top_monomial_mismatches", st_top, "str[c(e_1)...c(e_2n)] = (-2i)^n rank"),
        exact("supertrace_graded_trace_mismatches", graded_trace(&mut rng(seed, 2), n)?, "str[xy] = (-1)^{|x||y|} str[yx]"),
        exact("psi_t_homomorphism_mismatches", psi_mul, "psi_t(xy) = psi_t(x) psi_t(y)"),
        exact("psi_t_composition_mismatches", psi_comp, "psi_s psi_t = psi_st"),
        exact("getzler_composition_mismatches", getzler_composition(&mut rng(seed, 4), n)?, "delta_e delta_e' = delta_ee'"),
        Case::info("cases_per_property", n as f64, "plumbing"),
    ])
}
