use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::*;
use crate::linalg::Mat;
use crate::parametrix::{heat_trace_images, Character, ModelGeometry};

fn square() -> TorusConfig {
    TorusConfig::single(C64::new(0.0, 1.0), 1.0, 0.5, 0.0).unwrap()
}

fn skew() -> TorusConfig {
    TorusConfig::single(C64::new(0.3, 1.2), 1.7, 0.2, 0.7).unwrap()
}

fn log_grid(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| libm::exp(libm::log(a) + (libm::log(b) - libm::log(a)) * i as f64 / (k - 1) as f64)).collect()
}

/// Brute force over a box: `2π²/(λτ₂²) |(m+α)τ − (k+β)|²`.
fn brute_force(tau: C64, lam: f64, alpha: f64, beta: f64, count: usize) -> Vec<f64> {
    let mut v = Vec::new();
    for m in -40i64..=40 {
        for k in -40i64..=40 {
            let p = tau * (m as f64 + alpha) - (k as f64 + beta);
            v.push(2.0 * PI * PI / (lam * tau.im * tau.im) * p.norm_sqr());
        }
    }
    v.sort_by(f64::total_cmp);
    v.truncate(count);
    v
}

#[test]
fn config_validation() {
    let t = C64::new(0.0, 1.0);
    assert_eq!(TorusConfig::single(C64::new(0.0, -1.0), 1.0, 0.5, 0.0), Err(TorusError::InvalidModulus));
    assert_eq!(TorusConfig::single(t, 0.0, 0.5, 0.0), Err(TorusError::InvalidScale));
    assert_eq!(TorusConfig::single(t, 1.0, 0.0, 0.0), Err(TorusError::TrivialCharacter));
    assert_eq!(TorusConfig::single(t, 1.0, 1.2, 0.0), Err(TorusError::CharacterRange));
    let nu = TorusFactor::non_unitary(t, 1.0, C64::new(0.5, 0.1), C64::new(0.0, 0.0));
    assert_eq!(TorusConfig::new(vec![nu], 0), Err(TorusError::NonUnitary));
    assert!(TorusConfig::new_non_unitary(vec![nu], 0).is_ok());
    assert_eq!(TorusConfig::new(vec![TorusFactor::new(t, 1.0, 0.5, 0.0)], 2), Err(TorusError::DegreeOutOfRange { degree: 2, dim: 1 }));
    assert_eq!(TorusConfig::new(vec![], 0), Err(TorusError::NoFactors));
}

#[test]
fn spectrum_matches_brute_force() {
    for (tau, lam, a, b) in [(C64::new(0.0, 1.0), 1.0, 0.5, 0.0), (C64::new(0.3, 1.2), 1.7, 0.2, 0.7), (C64::new(-0.45, 0.9), 0.6, 0.0, 0.25)] {
        let cfg = TorusConfig::single(tau, lam, a, b).unwrap();
        let want = brute_force(tau, lam, a, b, 40);
        let slice = cfg.spectrum(0, want[39] * 1.5).unwrap();
        let got: Vec<f64> = slice.flat_values().iter().map(|v| v.re).collect();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12 * w, "{g} vs {w}");
        }
        assert!(slice.eigenvalues.windows(2).all(|w| w[0].0.re < w[1].0.re));
    }
    let s = square().spectrum(0, 10.0).unwrap();
    assert!((s.eigenvalues[0].0.re - PI * PI / 2.0).abs() < 1e-13);
    assert_eq!(s.eigenvalues[0].1, 2);
    assert!(matches!(square().spectrum(0, 1.0), Err(TorusError::EmptySpectrum { .. })));
}

#[test]
fn spectrum_symmetries() {
    let cfg = skew();
    let f = cfg.factors[0];
    let mirror = TorusConfig::single(f.tau, f.scale, 1.0 - f.alpha.re, 1.0 - f.beta.re).unwrap();
    let a = cfg.spectrum(0, 200.0).unwrap();
    let b = mirror.spectrum(0, 200.0).unwrap();
    assert_eq!(a.eigenvalues.len(), b.eigenvalues.len());
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert_eq!(x.1, y.1);
        assert!((x.0 - y.0).norm() < 1e-12 * x.0.norm());
    }
    let half = cfg.scaled(2.0).spectrum(0, 100.0).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&half.eigenvalues) {
        assert!((x.0 / 2.0 - y.0).norm() < 1e-12 * x.0.norm());
    }
    // Ω^{0,q} on a product: multiplicity C(n,q) C(n,p)
    let prod = TorusConfig::new(vec![square().factors[0], cfg.factors[0]], 1).unwrap();
    let q0 = prod.spectrum(0, 60.0).unwrap();
    let q1 = prod.spectrum(1, 60.0).unwrap();
    for (x, y) in q0.eigenvalues.iter().zip(&q1.eigenvalues) {
        assert_eq!(x.0, y.0);
        assert_eq!(2 * x.1, y.1);
    }
    assert_eq!(q0.eigenvalues[0].1 % 2, 0);
}

#[test]
fn modular_transform_preserves_spectrum() {
    for cfg in [skew(), TorusConfig::single(C64::new(0.1, 0.8), 1.0, 0.5, 0.5).unwrap()] {
        let t = TorusConfig::new(vec![cfg.factors[0].modular_s()], 0).unwrap();
        let a = cfg.spectrum(0, 150.0).unwrap().flat_values();
        let b = t.spectrum(0, 150.0).unwrap().flat_values();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-11 * x.norm());
        }
    }
}

#[test]
fn heat_routes_agree() {
    let nu = TorusFactor::non_unitary(C64::new(0.2, 1.1), 1.3, C64::new(0.3, 0.05), C64::new(0.6, -0.04));
    let cfgs = [
        square(),
        skew(),
        TorusConfig::new(vec![square().factors[0], skew().factors[0]], 1).unwrap(),
        TorusConfig::new_non_unitary(vec![nu], 0).unwrap(),
    ];
    for cfg in &cfgs {
        for t in log_grid(0.02, 3.0, 12) {
            let a = cfg.heat_trace(t, HeatRoute::Eigen).unwrap();
            let b = cfg.heat_trace(t, HeatRoute::Image).unwrap();
            // the image route cancels against the leading term
            let lead = cfg.volume() / libm::pow(2.0 * PI * t, cfg.n() as f64);
            assert!((a - b).norm() <= 1e-12 * a.norm().max(lead), "t={t}: {a} vs {b}");
            assert!((cfg.heat_excess(t).unwrap() + lead - b).norm() <= 1e-12 * b.norm().max(lead));
        }
    }
}

#[test]
fn heat_trace_matches_parametrix_image_sum() {
    for (f, chi) in [(square().factors[0], [0.5, 0.0]), (skew().factors[0], [0.2, 0.7])] {
        let s = libm::sqrt(f.scale);
        let geom = ModelGeometry::flat_torus([s, 0.0], [s * f.tau.re, s * f.tau.im]).unwrap();
        let cfg = TorusConfig::new(vec![f], 0).unwrap();
        for k in 0..=19 {
            let t = 0.1 + 0.1 * k as f64;
            let spectral = cfg.heat_trace(t, HeatRoute::Eigen).unwrap();
            let images = heat_trace_images(&geom, &Character::new(chi.to_vec()), t / 2.0).unwrap();
            assert!((spectral - images).norm() <= 1e-12 * spectral.norm(), "t={t}");
        }
    }
}

#[test]
fn supertrace_weights() {
    let cfg = skew();
    for t in [0.3, 1.0] {
        let h = heat_supertrace_n(&cfg, t, HeatRoute::Eigen).unwrap();
        assert!((h + cfg.heat_trace(t, HeatRoute::Eigen).unwrap()).norm() < 1e-15);
    }
    let mu = cfg.lowest_eigenvalue().re;
    let far = heat_supertrace_n(&cfg, 60.0, HeatRoute::Eigen).unwrap().norm();
    assert!(far > 0.0 && far < 10.0 * libm::exp(-60.0 * mu));
    let prod = TorusConfig::new(vec![square().factors[0], skew().factors[0]], 0).unwrap();
    assert_eq!(prod.number_weight(), 0.0);
    assert!((square().factors[0].shortest_period_sq() - 1.0).abs() < 1e-15);
    // τ = 0.3 + 1.2i: shortest period is 1, scaled by λ = 1.7
    assert!((skew().factors[0].shortest_period_sq() - 1.7).abs() < 1e-15);
    let one_p = TorusConfig::new(vec![skew().factors[0]], 1).unwrap();
    assert_eq!(one_p.number_weight(), -1.0);
}

#[test]
fn small_time_expansion_has_no_constant_term() {
    for cfg in [square(), skew()] {
        let fit = fit_small_t(&cfg, 0.0, 3, 30).unwrap();
        let lead = cfg.number_weight() * cfg.volume() / (2.0 * PI);
        assert!((fit.coeff(1, -1) - lead).norm() < 1e-9 * lead.abs(), "{:?}", fit.coeffs);
        assert!(fit.coeff(1, 0).norm() < 1e-8, "{:?}", fit.coeffs);
        assert!(fit.rms < 1e-9 * lead.abs());
    }
}

#[test]
fn mellin_matches_epstein() {
    for cfg in [TorusConfig::single(C64::new(0.0, 1.0), 1.0, 0.5, 0.5).unwrap(), square(), skew()] {
        let a = 0.5 * cfg.lowest_eigenvalue().re;
        let z = zeta_torsion(&cfg, a).unwrap();
        assert_eq!(z.small_count, 0);
        assert_eq!(z.small_factor, C64::new(1.0, 0.0));
        assert_eq!(z.torsion_log, z.zeta0_prime);
        assert_eq!(z.zeta0, C64::new(0.0, 0.0));
        let e = epstein_torsion_log(&cfg).unwrap();
        assert!((z.torsion_log.re - e).abs() < 1e-8, "{} vs {e}", z.torsion_log);
        assert!(z.torsion_log.im.abs() < 1e-14);
    }
}

#[test]
fn square_torus_closed_form() {
    // τ = i, χ = (½, 0): E′(0) = 2π·B₂(½) − Σ_m log(1 − e^{−2π|m+½|})²
    let cfg = square();
    let mut s = 0.0;
    for m in -30i64..30 {
        let y = (m as f64 + 0.5).abs();
        s += 2.0 * libm::log1p(-libm::exp(-2.0 * PI * y));
    }
    let e_prime = 2.0 * PI * (0.25 - 0.5 + 1.0 / 6.0) - s;
    assert!((epstein_torsion_log(&cfg).unwrap() + e_prime).abs() < 1e-14);
}

/// Midpoints between consecutive distinct eigenvalue levels.
fn gap_cuts(cfg: &TorusConfig, count: usize) -> Vec<f64> {
    let s = cfg.spectrum(0, 400.0).unwrap();
    s.eigenvalues.windows(2).take(count).map(|w| 0.5 * (w[0].0.re + w[1].0.re)).collect()
}

#[test]
fn torsion_is_independent_of_the_cut() {
    for cfg in [square(), skew()] {
        let base = zeta_torsion(&cfg, 0.5 * cfg.lowest_eigenvalue().re).unwrap().torsion_log;
        let mut counts = Vec::new();
        for a in gap_cuts(&cfg, 3) {
            let z = zeta_torsion(&cfg, a).unwrap();
            counts.push(z.small_count);
            assert!((z.torsion_log - base).norm() < 1e-8, "a={a}: {} vs {base}", z.torsion_log);
            assert_eq!(z.zeta0, C64::new(z.small_count as f64, 0.0));
        }
        assert!(counts.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn non_unitary_twist_is_flagged_and_cut_independent() {
    let nu = TorusFactor::non_unitary(C64::new(0.1, 1.0), 1.0, C64::new(0.4, 0.03), C64::new(0.3, 0.02));
    let cfg = TorusConfig::new_non_unitary(vec![nu], 0).unwrap();
    let base = zeta_torsion(&cfg, 0.5 * cfg.lowest_eigenvalue().re).unwrap();
    assert!(base.non_unitary);
    assert!(base.torsion_log.im.abs() > 1e-6);
    let levels: Vec<f64> = cfg.spectrum(0, 100.0).unwrap().eigenvalues.iter().map(|e| e.0.re).collect();
    let a = 0.5 * (levels[1] + levels[2]);
    let z = zeta_torsion(&cfg, a).unwrap();
    assert_eq!(z.small_count, 2);
    assert!((z.torsion_log - base.torsion_log).norm() < 1e-8);
    assert_eq!(epstein_torsion_log(&cfg), Err(TorusError::NotSupported));
}

#[test]
fn cut_errors() {
    let cfg = square();
    let mu = cfg.lowest_eigenvalue().re;
    assert!(matches!(zeta_torsion(&cfg, mu + 1e-11), Err(TorusError::CutTooClose { .. })));
    assert_eq!(zeta_torsion(&cfg, 0.0), Err(TorusError::NonPositiveCut));
    assert_eq!(zeta_torsion(&cfg, -1.0), Err(TorusError::NonPositiveCut));
}

#[test]
fn modular_invariance_of_torsion() {
    for cfg in [skew(), TorusConfig::single(C64::new(0.1, 0.8), 1.0, 0.5, 0.5).unwrap()] {
        let t = TorusConfig::new(vec![cfg.factors[0].modular_s()], 0).unwrap();
        let a = zeta_torsion(&cfg, 0.5 * cfg.lowest_eigenvalue().re).unwrap().torsion_log;
        let b = zeta_torsion(&t, 0.5 * t.lowest_eigenvalue().re).unwrap().torsion_log;
        assert!((a - b).norm() < 1e-8);
    }
}

#[test]
fn zeta_scaling_covariance() {
    let base = skew();
    let lam = 2.0;
    let scaled = base.scaled(lam);
    let cut = gap_cuts(&base, 2)[1];
    for s in [0.5, 1.5, 2.5] {
        let lhs = zeta_a(&scaled, cut / lam, s).unwrap();
        let rhs = zeta_a(&base, cut, s).unwrap() * libm::pow(lam, s);
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0), "s={s}: {lhs} vs {rhs}");
    }
    // for s > n the Dirichlet series converges; compare with a truncated sum
    let s = 3.0;
    let direct: f64 = base.spectrum(0, 4000.0).unwrap().flat_values().iter().filter(|v| v.re > cut).map(|v| -libm::pow(v.re, -s)).sum();
    let tail = base.volume() / (2.0 * PI) * libm::pow(4000.0, 1.0 - s) / (s - 1.0);
    let z = zeta_a(&base, cut, s).unwrap();
    assert!((z.re - direct).abs() < 2.0 * tail, "{} vs {direct}", z.re);
}

#[test]
fn products_have_vanishing_torsion() {
    let prod = TorusConfig::new(vec![square().factors[0], skew().factors[0]], 1).unwrap();
    let z = zeta_torsion(&prod, 0.5 * prod.lowest_eigenvalue().re).unwrap();
    assert_eq!(z.torsion_log, C64::new(0.0, 0.0));
    let cut = gap_cuts(&prod, 2)[1];
    let z = zeta_torsion(&prod, cut).unwrap();
    assert_eq!(z.torsion_log, C64::new(0.0, 0.0));
    assert_eq!(z.small_factor, C64::new(1.0, 0.0));
}

fn number_operator(n: usize) -> Mat<C64> {
    Mat::from_fn(1 << n, 1 << n, |i, j| if i == j { C64::new((i as u32).count_ones() as f64, 0.0) } else { C64::new(0.0, 0.0) })
}

#[test]
fn clifford_relations_and_q_operators() {
    for n in 1..=3 {
        let cl = clifford_matrices(n);
        let id = Mat::<C64>::identity(1 << n);
        for a in 0..2 * n {
            for b in 0..2 * n {
                let anti = cl[a].mul(&cl[b]).add(&cl[b].mul(&cl[a]));
                let want = if a == b { id.scale(&C64::new(-2.0, 0.0)) } else { id.scale(&C64::new(0.0, 0.0)) };
                assert!(anti.sub(&want).max_abs() < 1e-15);
            }
        }
        // scaling family: Q₁ = n − N, Q₂ = −p
        let th = scaling_theta_dot(n);
        let q1 = q1_operator(&th);
        let want = id.scale(&C64::new(n as f64, 0.0)).sub(&number_operator(n));
        assert!(q1.sub(&want).max_abs() < 1e-14, "n={n}");
        for p in 0..=n {
            let q2 = q2_operator(&th, p);
            let dp = binomial(n, p);
            assert!(q2.sub(&Mat::<C64>::identity(dp).scale(&C64::new(-(p as f64), 0.0))).max_abs() < 1e-14);
            let q = q_operator(&th, p);
            // str(n − N − p) over Λ(ℂⁿ) ⊗ Λᵖ
            let want: f64 = (0..=n).map(|q| if q % 2 == 0 { 1.0 } else { -1.0 } * (n - q) as f64 * binomial(n, q) as f64).sum::<f64>() * dp as f64;
            assert!((fiber_supertrace(&q, n, p) - C64::new(want, 0.0)).norm() < 1e-13);
        }
    }
    // p = 0: Q₂ acts on Λ⁰ and vanishes
    assert!(q2_operator(&scaling_theta_dot(2), 0).max_abs() == 0.0);
}

#[test]
fn d_squared_is_twice_box() {
    let cfgs = [square(), skew(), TorusConfig::new(vec![square().factors[0], skew().factors[0]], 0).unwrap()];
    for cfg in &cfgs {
        let r = d_squared_check(cfg, 20).unwrap();
        assert!(r.dirac_vs_dolbeault < 1e-12, "{r:?}");
        assert!(r.d_squared_vs_two_box < 1e-12, "{r:?}");
        assert!(r.box_vs_eigenvalue < 1e-12, "{r:?}");
    }
}

#[test]
fn leading_coefficient_matches_local_formula() {
    for cfg in [skew(), TorusConfig::new(vec![skew().factors[0]], 1).unwrap()] {
        let n = cfg.n();
        let q1 = q1_operator(&scaling_theta_dot(n));
        let dp = binomial(n, cfg.p);
        let str_q1 = fiber_supertrace(&q1, n, 0) * dp as f64;
        let ts = log_grid(1e-3, 1e-2, 12);
        let vals: Vec<C64> = ts.iter().map(|&t| str_q1 * cfg.heat_trace(t, HeatRoute::Image).unwrap()).collect();
        let fit = m0_fit(&ts, &vals, n, 2).unwrap();
        let local = a_minus_one_local(&cfg).unwrap();
        assert!((fit.coeff(-1) - local).norm() < 1e-9 * local.norm(), "{} vs {local}", fit.coeff(-1));
    }
    let prod = TorusConfig::new(vec![square().factors[0], skew().factors[0]], 0).unwrap();
    assert_eq!(a_minus_one_local(&prod).unwrap(), C64::new(0.0, 0.0));
    assert_eq!(fiber_supertrace(&q1_operator(&scaling_theta_dot(2)), 2, 0), C64::new(0.0, 0.0));
}

#[test]
fn laurent_fit_recovers_planted_coefficients() {
    let ts = log_grid(0.01, 0.5, 25);
    let planted = [C64::new(0.7, -0.2), C64::new(-1.3, 0.0), C64::new(0.25, 0.5), C64::new(2.0, 0.0)];
    let vals: Vec<C64> = ts.iter().map(|&t| planted.iter().enumerate().map(|(i, c)| *c * libm::pow(t, i as f64 - 1.0)).sum()).collect();
    let fit = m0_fit(&ts, &vals, 1, 2).unwrap();
    for (i, c) in planted.iter().enumerate() {
        assert!((fit.coeffs[i] - c).norm() < 1e-10);
    }
    assert_eq!(m0_fit(&[0.1, 0.2, 0.5], &[C64::new(1.0, 0.0); 3], 1, 0), Err(TorusError::ShortGrid));
    assert_eq!(m0_fit(&[0.1, 2.0], &[C64::new(1.0, 0.0); 2], 1, 0), Err(TorusError::ShortGrid));
}

#[test]
fn variation_formula_on_flat_family() {
    for cfg in [square(), skew(), TorusConfig::new(vec![skew().factors[0]], 1).unwrap()] {
        let fit = m0_extract(&cfg, &log_grid(1e-3, 1e-2, 12), 2).unwrap();
        assert!(fit.m0().norm() < 1e-6, "{}", fit.m0());
        let fd = log_torsion_derivative_fd(&cfg, 1e-2).unwrap();
        assert!((fd + fit.m0()).norm() < 1e-4, "{fd}");
    }
}

#[test]
fn anomaly_for_flat_scaling() {
    let cfg = skew();
    let r = anomaly_check(&cfg, 1.0, 2.0, 1e-6).unwrap();
    assert_eq!(r.rhs, C64::new(0.0, 0.0));
    assert!(r.lhs.norm() < 1e-6, "{}", r.lhs);
    assert!(r.pass);
    let same = anomaly_check(&cfg, 1.3, 1.3, 1e-6).unwrap();
    assert_eq!(same.lhs, C64::new(0.0, 0.0));
    assert_eq!(same.rhs, C64::new(0.0, 0.0));
}
