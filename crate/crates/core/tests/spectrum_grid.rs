//! Grid-discretization oracle for the twisted torus spectrum.
//!
//! In lattice coordinates `z = u + vτ`, `u, v ∈ [0, 1)`, the operator is
//! `□ = −(1/2λ)(∂_u² + (∂_v − τ₁∂_u)²/τ₂²)` acting on functions with
//! `f(u+1, v) = e^{2πiα} f` and `f(u, v+1) = e^{2πiβ} f`. Fourth-order
//! centered stencils on an `N × N` grid, dense Hermitian eigensolver.

use holotorsion_core::torus::TorusConfig;
use holotorsion_core::C64;
use nalgebra::DMatrix;
use std::f64::consts::PI;

const D2: [(i64, f64); 5] = [(-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0)];
const D1: [(i64, f64); 4] = [(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)];

/// Index and twist phase for grid point `i + s`.
fn wrap(i: usize, s: i64, n: usize, phase: f64) -> (usize, C64) {
    let j = i as i64 + s;
    let turns = j.div_euclid(n as i64);
    let idx = j.rem_euclid(n as i64) as usize;
    (idx, C64::from_polar(1.0, 2.0 * PI * phase * turns as f64))
}

fn grid_box(tau: C64, lam: f64, alpha: f64, beta: f64, n: usize) -> DMatrix<C64> {
    let h = 1.0 / n as f64;
    let (t1, t2) = (tau.re, tau.im);
    // ∂_u² (1 + τ₁²/τ₂²) + ∂_v²/τ₂² − 2τ₁/τ₂² ∂_u∂_v
    let cuu = 1.0 + t1 * t1 / (t2 * t2);
    let cvv = 1.0 / (t2 * t2);
    let cuv = -2.0 * t1 / (t2 * t2);
    let pre = -1.0 / (2.0 * lam * h * h);
    let mut m = DMatrix::<C64>::zeros(n * n, n * n);
    let at = |iu: usize, iv: usize| iu * n + iv;
    for iu in 0..n {
        for iv in 0..n {
            let row = at(iu, iv);
            for &(s, w) in &D2 {
                let (ju, pu) = wrap(iu, s, n, alpha);
                m[(row, at(ju, iv))] += pu * (pre * cuu * w);
                let (jv, pv) = wrap(iv, s, n, beta);
                m[(row, at(iu, jv))] += pv * (pre * cvv * w);
            }
            for &(su, wu) in &D1 {
                for &(sv, wv) in &D1 {
                    let (ju, pu) = wrap(iu, su, n, alpha);
                    let (jv, pv) = wrap(iv, sv, n, beta);
                    m[(row, at(ju, jv))] += pu * pv * (pre * cuv * wu * wv);
                }
            }
        }
    }
    m
}

fn check(tau: C64, lam: f64, alpha: f64, beta: f64) {
    let grid = grid_box(tau, lam, alpha, beta, 30);
    let herm = (&grid - grid.adjoint()).camax();
    assert!(herm < 1e-9 * grid.camax(), "discrete operator not Hermitian: {herm}");
    let mut ev: Vec<f64> = grid.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    let cfg = TorusConfig::single(tau, lam, alpha, beta).unwrap();
    let exact = cfg.spectrum(0, 20.0 * cfg.lowest_eigenvalue().re + 200.0).unwrap().flat_values();
    for (g, e) in ev.iter().zip(exact.iter()).take(10) {
        let rel = (g - e.re).abs() / e.re;
        assert!(rel < 0.01, "τ={tau} λ={lam} χ=({alpha},{beta}): grid {g} vs exact {}", e.re);
    }
}

#[test]
fn square_torus_half_character() {
    check(C64::new(0.0, 1.0), 1.0, 0.5, 0.0);
}

#[test]
fn square_torus_diagonal_character() {
    check(C64::new(0.0, 1.0), 1.0, 0.5, 0.5);
}

#[test]
fn skew_torus() {
    check(C64::new(0.3, 1.2), 1.7, 0.2, 0.7);
}
