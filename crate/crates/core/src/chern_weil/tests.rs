use super::*;
use crate::scalar::{cratio, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Mv = Multivector<Rational>;
type Fm = FormMatrix<Rational>;

fn r(n: i64, d: i64) -> Complex<Rational> {
    cratio(n, d)
}

fn two_form(space: GeneratorSpace, rng: &mut ChaCha8Rng) -> Mv {
    let nf = space.n_frame();
    let mut x = Mv::zero(space);
    for i in 0..nf {
        for j in i + 1..nf {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                x = x + (Mv::e(space, i) * Mv::e(space, j)).scale(&r(c, rng.gen_range(1i64..=3)));
            }
        }
    }
    x
}

fn random_form_matrix(space: GeneratorSpace, dim: usize, rng: &mut ChaCha8Rng) -> Fm {
    FormMatrix::from_fn(space, dim, |_, _| two_form(space, rng))
}

/// Leibniz determinant of `I + tM` as a polynomial in `t` with form coefficients.
fn det_i_plus_tm(m: &Fm) -> Vec<Mv> {
    let n = m.dim();
    let space = m.space();
    let mut coeffs = vec![Mv::zero(space); n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let sign = parity(p);
        // Π_i (δ_{i,p(i)} + t M_{i,p(i)}) as a polynomial in t
        let mut poly = vec![Mv::one(space)];
        for (i, &pi) in p.iter().enumerate() {
            let mut next = vec![Mv::zero(space); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                if i == pi {
                    next[k] = next[k].clone() + c.clone();
                }
                next[k + 1] = next[k + 1].clone() + c.clone() * m.get(i, pi).clone();
            }
            poly = next;
        }
        for (k, c) in poly.into_iter().enumerate() {
            coeffs[k] = if sign { coeffs[k].clone() - c } else { coeffs[k].clone() + c };
        }
    });
    coeffs
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

fn parity(p: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

#[test]
fn exp_of_zero_and_square_zero() {
    let s = GeneratorSpace::frame(4).unwrap();
    let z = Fm::zeros(s, 2);
    assert_eq!(mat_series(&ScalarSeries::Exp, &z).unwrap(), Fm::identity(s, 2));
    let mut n = Fm::zeros(s, 2);
    n.set(0, 1, Mv::e(s, 0) * Mv::e(s, 1));
    assert_eq!(n.mul(&n), Fm::zeros(s, 2));
    assert_eq!(mat_series(&ScalarSeries::Exp, &n).unwrap(), Fm::identity(s, 2).add(&n));
}

#[test]
fn exp_about_scalar_matches_dual_numbers() {
    // (cI + εN) with ε² = 0: exp = e^c (I + εN)
    let s = GeneratorSpace::frame(2).unwrap();
    let c = C64::new(0.3, -0.7);
    let eps = Multivector::<f64>::e(s, 0) * Multivector::e(s, 1);
    let nnum = Mat::from_rows(2, 2, vec![C64::new(1.0, 2.0), C64::new(-0.5, 0.0), C64::new(0.25, 0.0), C64::new(0.0, -1.0)]);
    let m = FormMatrix::from_numeric(s, &Mat::<C64>::identity(2).scale(&c)).add(&FormMatrix::numeric_times(s, &nnum, &eps));
    let got = mat_series(&ScalarSeries::Exp, &m).unwrap();
    let ec = c.exp();
    for i in 0..2 {
        for j in 0..2 {
            let want0 = if i == j { ec } else { C64::zero() };
            let want1 = ec * nnum.get(i, j);
            assert!((got.get(i, j).scalar_part() - want0).norm() < 1e-14);
            assert!((got.get(i, j).coeff(0b11) - want1).norm() < 1e-14);
        }
    }
    let bad = FormMatrix::from_numeric(s, &nnum);
    assert_eq!(mat_series(&ScalarSeries::Exp, &bad), Err(ChernWeilError::NotScalarIdentity));
}

#[test]
fn series_runs_out() {
    let s = GeneratorSpace::frame(4).unwrap();
    let a = Mv::e(s, 0) * Mv::e(s, 1) + Mv::e(s, 2) * Mv::e(s, 3);
    let short = ScalarSeries::AtZero(vec![r(1, 1), r(1, 1)]);
    assert!(matches!(form_series(&short, &a), Err(ChernWeilError::SeriesTooShort { .. })));
}

#[test]
fn todd_scalar_against_series_division() {
    let s = GeneratorSpace::frame(8).unwrap();
    let a = Mv::e(s, 0) * Mv::e(s, 1) + Mv::e(s, 2) * Mv::e(s, 3) + Mv::e(s, 4) * Mv::e(s, 5) + Mv::e(s, 6) * Mv::e(s, 7);
    // a/(e^a − 1) = 1 / Σ a^k/(k+1)!, inverted term by term
    let g: Vec<Rational> = (0..=4).map(|k| Rational::from_integer(1) / series::factorial(k + 1)).collect();
    let mut inv = vec![Rational::from_integer(1)];
    for k in 1..=4 {
        let mut acc = Rational::from_integer(0);
        for j in 1..=k {
            acc -= g[j] * inv[k - j];
        }
        inv.push(acc);
    }
    assert_eq!(inv, vec![Rational::new(1, 1), Rational::new(-1, 2), Rational::new(1, 12), Rational::new(0, 1), Rational::new(-1, 720)]);
    let mut want = Mv::zero(s);
    for (k, c) in inv.iter().enumerate() {
        want = want + a.pow(k).scale(&crational(c));
    }
    let m = Fm::from_fn(s, 1, |_, _| a.clone());
    assert_eq!(todd(&m).unwrap(), want);
    assert_eq!(todd(&Fm::zeros(s, 3)).unwrap(), Mv::one(s));
}

#[test]
fn todd_multiplicative_and_ch_additive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=3 {
        let s = GeneratorSpace::frame(2 * n).unwrap();
        for _ in 0..4 {
            let a = random_form_matrix(s, rng.gen_range(1..=2), &mut rng);
            let b = random_form_matrix(s, rng.gen_range(1..=2), &mut rng);
            let ab = a.direct_sum(&b);
            assert_eq!(todd(&ab).unwrap(), todd(&a).unwrap() * todd(&b).unwrap());
            assert_eq!(trace_exp(&ab).unwrap(), trace_exp(&a).unwrap() + trace_exp(&b).unwrap());
            assert_eq!(ahat(&ab).unwrap(), ahat(&a).unwrap() * ahat(&b).unwrap());
        }
    }
}

#[test]
fn sigma_newton_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for dim in 1..=3 {
        let s = GeneratorSpace::frame(6).unwrap();
        let m = random_form_matrix(s, dim, &mut rng);
        let want = det_i_plus_tm(&m);
        let got = sigma_all(&m);
        assert_eq!(got, want);
        assert_eq!(sigma_p(0, &m).unwrap(), Mv::one(s));
        assert_eq!(sigma_p(1, &m).unwrap(), m.trace());
        assert_eq!(sigma_p(dim, &m).unwrap(), laplace_det(&m).unwrap());
        assert!(sigma_p(dim + 1, &m).is_err());
    }
}

#[test]
fn td_p_special_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for n in 1..=3 {
        let s = GeneratorSpace::frame(2 * n).unwrap();
        let m = random_form_matrix(s, n, &mut rng);
        assert_eq!(td_p(0, &m).unwrap(), todd(&m).unwrap());
        let det_exp = form_exp(&m.trace()).unwrap();
        assert_eq!(td_p(n, &m).unwrap(), todd(&m).unwrap() * det_exp);
        for p in 0..=n {
            let binom = (0..p).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64);
            assert_eq!(td_p(p, &Fm::zeros(s, n)).unwrap(), Mv::scalar(s, r(binom, 1)));
        }
    }
}

#[test]
fn outputs_have_even_degree_at_most_2n() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = GeneratorSpace::frame(6).unwrap();
    let m = random_form_matrix(s, 3, &mut rng);
    for x in [todd(&m).unwrap(), td_p(2, &m).unwrap(), ahat(&m).unwrap(), trace_exp(&m).unwrap()] {
        assert!(x.is_even());
        assert!(x.max_frame_degree().unwrap_or(0) <= 6);
    }
}

#[test]
fn chern_character_cases() {
    let s = GeneratorSpace::frame(4).unwrap();
    assert_eq!(chern_char(&FormMatrix::zeros(s, 3)).unwrap(), Multivector::scalar(s, C64::new(3.0, 0.0)));
    let e = |i| Multivector::<f64>::e(s, i);
    let mut re = FormMatrix::zeros(s, 2);
    re.set(0, 0, (e(0) * e(1)).scale(&C64::new(0.0, 1.5)));
    re.set(1, 1, (e(2) * e(3)).scale(&C64::new(0.0, -0.5)));
    re.set(0, 1, (e(0) * e(2)).scale(&C64::new(0.2, 0.0)));
    let ch = chern_char(&re).unwrap();
    let want2 = re.trace().scale(&(-C64::new(0.0, 2.0 * PI).inv()));
    assert!(ch.frame_part(2).approx_eq(&want2, 1e-15));
    assert_eq!(ch.scalar_part(), C64::new(2.0, 0.0));
}

#[test]
fn trace_identity_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for case in 0..50 {
        let n = 1 + case % 4;
        let a = Mat::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        for p in 0..=n {
            let (lhs, rhs) = sigma_p_trace_identity_check(p, &a).unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm().max(1.0), "n={n} p={p}");
        }
        let (l0, r0) = sigma_p_trace_identity_check(0, &a).unwrap();
        assert!((l0 - 1.0).norm() < 1e-14 && (r0 - 1.0).norm() < 1e-14);
        let (ln, rn) = sigma_p_trace_identity_check(n, &a).unwrap();
        let tr = (0..n).fold(C64::zero(), |acc, i| acc + a.get(i, i));
        assert!((ln - tr.exp()).norm() < 1e-12 * tr.exp().norm() && (rn - tr.exp()).norm() < 1e-12 * tr.exp().norm());
    }
}

#[test]
fn b_derivative_trivial_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 1..=2 {
        let s = GeneratorSpace::frame(2 * n).unwrap();
        let rr = random_form_matrix(s, n, &mut rng);
        for p in 0..=n {
            assert!(td_p_b_derivative(p, &rr, &Fm::zeros(s, n)).unwrap().is_zero());
            let u = Fm::from_numeric(s, &Mat::from_fn(n, n, |i, j| r((i + 2 * j) as i64 - 1, 2)));
            let d = td_p_b_derivative(p, &Fm::zeros(s, n), &u).unwrap();
            assert!(d.frame_part(2 * n as u32).is_zero());
        }
    }
}

/// Central difference `[F(R + hU) − F(R − hU)] / 2h` of the float route.
fn central_difference(p: usize, r0: &FormMatrix<f64>, u: &FormMatrix<f64>, h: f64) -> Multivector<f64> {
    let plus = td_p_general(p, &r0.add(&u.scale(&C64::new(h, 0.0)))).unwrap();
    let minus = td_p_general(p, &r0.sub(&u.scale(&C64::new(h, 0.0)))).unwrap();
    (plus - minus).scale(&C64::new(0.5 / h, 0.0))
}

#[test]
fn b_derivative_vs_finite_difference() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    // 1×1 and 2×2 with invertible numeric parts
    for dim in 1..=2 {
        let s = GeneratorSpace::frame(2 * dim).unwrap();
        let num = Mat::from_fn(dim, dim, |i, j| C64::new(if i == j { 0.8 + 0.3 * i as f64 } else { 0.2 }, 0.1 * (i as f64 - j as f64)));
        let form = random_form_matrix(s, dim, &mut rng).to_f64();
        let r0 = FormMatrix::from_numeric(s, &num).add(&form);
        let u = FormMatrix::from_numeric(s, &Mat::from_fn(dim, dim, |i, j| C64::new(rng.gen_range(-1.0..1.0), if i == j { 0.0 } else { 0.3 })));
        for p in 0..=dim {
            let exact = td_p_b_derivative_general(p, &r0, &u).unwrap();
            let fd = central_difference(p, &r0, &u, 1e-4);
            assert!(exact.approx_eq(&fd, 1e-8), "dim={dim} p={p}\n{exact}\n{fd}");
        }
    }
}

#[test]
fn b_derivative_one_by_one_closed_form() {
    // td_0(x) = x/(e^x − 1) = Σ B_k x^k/k!, so ∂_b td_0(r + b u) = u Σ B_{k+1} r^k / k!.
    let s = GeneratorSpace::frame(6).unwrap();
    let rr = Mv::e(s, 0) * Mv::e(s, 1).scale(&r(2, 3)) + Mv::e(s, 2) * Mv::e(s, 3) + Mv::e(s, 4) * Mv::e(s, 5).scale(&r(-1, 2));
    let u = r(5, 7);
    let b = series::bernoulli(4);
    let mut want = Mv::zero(s);
    for k in 0..=3 {
        want = want + rr.pow(k).scale(&(crational::<Rational>(&(b[k + 1] / series::factorial(k))) * u));
    }
    let got = td_p_b_derivative(0, &Fm::from_fn(s, 1, |_, _| rr.clone()), &Fm::from_fn(s, 1, |_, _| Mv::scalar(s, u))).unwrap();
    assert_eq!(got, want);
    // td_1(x) = x e^x/(e^x − 1) = x/(1 − e^{−x}) = Σ B_k (−x)^k/k!
    let mut want1 = Mv::zero(s);
    for k in 0..=3 {
        let sign = if (k + 1) % 2 == 0 { 1 } else { -1 };
        want1 = want1 + rr.pow(k).scale(&(crational::<Rational>(&(b[k + 1] / series::factorial(k))) * u * r(sign, 1)));
    }
    let got1 = td_p_b_derivative(1, &Fm::from_fn(s, 1, |_, _| rr.clone()), &Fm::from_fn(s, 1, |_, _| Mv::scalar(s, u))).unwrap();
    assert_eq!(got1, want1);
}

#[test]
fn transgression_cases() {
    let s = GeneratorSpace::frame(2).unwrap();
    let e12 = Multivector::<f64>::e(s, 0) * Multivector::e(s, 1);
    let spec = QuadSpec::default();
    let constant = |_l: f64| CurvatureData {
        r_plus: FormMatrix::from_fn(s, 1, |_, _| e12.clone()),
        r_e: FormMatrix::zeros(s, 1),
        u_plus: FormMatrix::zeros(s, 1),
        theta_dot: Mat::zeros(2, 2),
        theta_dot_grad: vec![],
    };
    assert!(transgression_form(constant, 0, &spec).unwrap().max_abs_coeff() < 1e-15);
    let flat = |_l: f64| CurvatureData::flat_scaling(s, 1).unwrap();
    for p in 0..=1 {
        assert!(transgression_form(flat, p, &spec).unwrap().frame_part(2).is_zero());
    }
    // R_ℓ = ℓ e¹², U_ℓ = cos ℓ, p = 0: ∂_b td = −U/2 + R U/6
    let family = |l: f64| CurvatureData {
        r_plus: FormMatrix::from_fn(s, 1, |_, _| e12.scale(&C64::new(l, 0.0))),
        r_e: FormMatrix::zeros(s, 1),
        u_plus: FormMatrix::from_numeric(s, &Mat::from_rows(1, 1, vec![C64::new(l.cos(), 0.0)])),
        theta_dot: Mat::zeros(2, 2),
        theta_dot_grad: vec![],
    };
    let got = transgression_form(family, 0, &spec).unwrap();
    let one = 1.0f64;
    let norm = C64::new(0.0, 2.0 * PI).inv();
    let want0 = norm * (-one.sin() / 2.0);
    let want2 = norm * ((one.cos() + one.sin() - 1.0) / 6.0);
    assert!((got.scalar_part() - want0).norm() < 1e-10);
    assert!((got.coeff(0b11) - want2).norm() < 1e-10);
}

#[test]
fn integrate_top_cases() {
    let s = GeneratorSpace::frame(4).unwrap();
    let model = ModelVolume { real_dim: 4, volume: 2.5 };
    assert_eq!(integrate_top(&Multivector::zero(s), &model).unwrap(), C64::zero());
    let vol = Multivector::from_key(s, 0b1111, C64::new(1.0, 0.0));
    assert_eq!(integrate_top(&vol, &model).unwrap(), C64::new(2.5, 0.0));
    assert_eq!(integrate_top(&vol.scale(&C64::new(0.0, 3.0)), &model).unwrap(), C64::new(0.0, 7.5));
}

#[test]
fn realify_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 1..=2 {
        let s = GeneratorSpace::frame(2 * n).unwrap();
        // Â(realify R) e^{−½ tr R} = td(R)
        let rr = random_form_matrix(s, n, &mut rng);
        let lhs = ahat(&realify(&rr)).unwrap() * form_exp(&rr.trace().scale(&r(-1, 2))).unwrap();
        assert_eq!(lhs, todd(&rr).unwrap());
        // Θ̇(e_i, J e_i) = 2 tr U⁺ for Hermitian U⁺
        let mut u = Mat::<Complex<Rational>>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == j { r(rng.gen_range(-4..4), 3) } else if i < j { Complex::new(Rational::new(1, 2), Rational::new(i as i128 - 1, 3)) } else { Complex::new(Rational::new(1, 2), -Rational::new(j as i128 - 1, 3)) };
                u.set(i, j, v);
            }
        }
        let data = CurvatureData::new(Fm::zeros(s, n), Fm::zeros(s, 1), Fm::from_numeric(s, &u)).unwrap();
        assert!(data.is_theta_dot_antisymmetric());
        let tr = (0..n).fold(Complex::<Rational>::zero(), |acc, i| acc + *u.get(i, i));
        assert_eq!(data.theta_dot_trace_j(), tr + tr);
    }
}
