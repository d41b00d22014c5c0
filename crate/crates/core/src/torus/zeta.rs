//! Zeta-regularized torsion `ζ_a′(0)` by Mellin transform, and the
//! Kronecker-limit closed form for one factor.
//!
//! With `h_a(t) = tr_s[N e^{−t□} P_a] = w (Θ(t) − Σ_{Re μ<a} e^{−tμ})`,
//! `w = Σ_q (−1)^q q C(n,q) C(n,p)`, the small-time expansion is
//! `h_a(t) = c_{−n} t^{−n} + c_0 + O(t)` plus exponentially small terms, with
//! `c_{−n} = w vol/(2π)ⁿ` and `c_0 = −w #{Re μ < a}`. Then
//!
//! `ζ_a′(0) = ∫₀¹ (h_a − c_{−n}t^{−n} − c_0) dt/t + ∫₁^∞ h_a dt/t − c_{−n}/n + γ c_0`,
//!
//! and `torsion_log = ζ_a′(0) + log Π_q det(□|_{<a,q})^{(−1)^{q+1} q}`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{HeatRoute, TorusConfig, TorusError};
use crate::numeric;
use crate::quad::integrate_doubling;
use crate::scalar::C64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const QUAD_TOL: f64 = 1e-14;

/// Mellin-route torsion data at a spectral cut `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaResult {
    pub cut: f64,
    pub zeta0: C64,
    pub zeta0_prime: C64,
    /// `Π_q det(□|_{<a,q})^{(−1)^{q+1} q}`.
    pub small_factor: C64,
    pub log_small_factor: C64,
    pub torsion_log: C64,
    /// Sum of quadrature error estimates.
    pub err: f64,
    /// Eigenvalues (product modes) below the cut.
    pub small_count: usize,
    /// Complex character: principal-branch logs, reported but not asserted.
    pub non_unitary: bool,
}

/// `e^z − 1` without cancellation for small `|z|`.
fn cexpm1(z: C64) -> C64 {
    let (s, c) = (libm::sin(z.im), libm::cos(z.im));
    let half = libm::sin(0.5 * z.im);
    let em1 = libm::expm1(z.re);
    // e^x cos y − 1 = expm1(x) cos y − 2 sin²(y/2)
    C64::new(em1 * c - 2.0 * half * half, libm::exp(z.re) * s)
}

/// Spectrum data around the cut.
struct CutData {
    small: Vec<C64>,
    /// Smallest real part at or above the cut.
    first_large: f64,
}

fn cut_data(config: &TorusConfig, a: f64) -> Result<CutData, TorusError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(TorusError::NonPositiveCut);
    }
    let mut lmax = 2.0 * a + 1.0;
    loop {
        let modes = config.modes_below(lmax);
        if let Some(bad) = modes.iter().find(|m| m.0.re <= 0.0 || (m.0.im != 0.0 && m.0.re <= 0.0)) {
            return Err(TorusError::BranchCut { eigenvalue: bad.0 });
        }
        if let Some(close) = modes.iter().find(|m| (m.0.re - a).abs() < 1e-9) {
            return Err(TorusError::CutTooClose { a, eigenvalue: close.0.re });
        }
        if let Some(first) = modes.iter().find(|m| m.0.re > a) {
            let small: Vec<C64> = modes.iter().filter(|m| m.0.re < a).map(|m| m.0).collect();
            return Ok(CutData { small, first_large: first.0.re });
        }
        lmax *= 2.0;
    }
}

/// `∫₀¹ t^{s−1} g(t) dt` and `∫₁^∞ t^{s−1} h_a(t) dt` with their errors.
fn mellin_pieces(config: &TorusConfig, cut: &CutData, s: f64) -> Result<(C64, C64, f64), TorusError> {
    let w = config.number_weight();
    let mut err = 0.0;
    let mut failure = None;
    let g = |t: f64| -> C64 {
        let ex = match config.heat_excess(t) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                return C64::new(0.0, 0.0);
            }
        };
        let small: C64 = cut.small.iter().map(|&mu| cexpm1(-mu * t)).sum();
        (ex - small) * w * libm::pow(t, s - 1.0)
    };
    let (re, im) = {
        let g = core::cell::RefCell::new(g);
        (integrate_doubling(|t| (g.borrow_mut())(t).re, 0.0, 1.0, QUAD_TOL), integrate_doubling(|t| (g.borrow_mut())(t).im, 0.0, 1.0, QUAD_TOL))
    };
    if let Some(e) = failure.take() {
        return Err(e);
    }
    err += re.err + im.err;
    let small_part = C64::new(re.value, im.value);

    let t_end = 1.0 + 45.0 / cut.first_large;
    let mut large_part = C64::new(0.0, 0.0);
    let mut lo = 1.0;
    while lo < t_end {
        let hi = (2.0 * lo).min(t_end.max(lo * 1.0001));
        let mut fail = None;
        let h = |t: f64| -> C64 {
            let theta = match config.heat_trace(t, HeatRoute::Eigen) {
                Ok(v) => v,
                Err(e) => {
                    fail.get_or_insert(e);
                    return C64::new(0.0, 0.0);
                }
            };
            let small: C64 = cut.small.iter().map(|&mu| (-mu * t).exp()).sum();
            (theta - small) * w * libm::pow(t, s - 1.0)
        };
        let (re, im) = {
            let h = core::cell::RefCell::new(h);
            (integrate_doubling(|t| (h.borrow_mut())(t).re, lo, hi, QUAD_TOL), integrate_doubling(|t| (h.borrow_mut())(t).im, lo, hi, QUAD_TOL))
        };
        if let Some(e) = fail.take() {
            return Err(e);
        }
        err += re.err + im.err;
        large_part += C64::new(re.value, im.value);
        lo = hi;
    }
    Ok((small_part, large_part, err))
}

/// Torsion at cut `a` via the Mellin transform of the heat supertrace.
pub fn zeta_torsion(config: &TorusConfig, a: f64) -> Result<ZetaResult, TorusError> {
    let cut = cut_data(config, a)?;
    let w = config.number_weight();
    let n = config.n();
    let non_unitary = !config.is_unitary();
    let log_small: C64 = cut.small.iter().map(|mu| mu.ln()).sum::<C64>() * (-w);
    if w == 0.0 {
        // tr_s[N e^{−t□}] vanishes identically.
        let zero = C64::new(0.0, 0.0);
        return Ok(ZetaResult {
            cut: a,
            zeta0: zero,
            zeta0_prime: zero,
            small_factor: C64::new(1.0, 0.0),
            log_small_factor: zero,
            torsion_log: zero,
            err: 0.0,
            small_count: cut.small.len(),
            non_unitary,
        });
    }
    let c_lead = w * config.volume() / libm::pow(2.0 * PI, n as f64);
    let c0 = -w * cut.small.len() as f64;
    let (small_part, large_part, err) = mellin_pieces(config, &cut, 0.0)?;
    let zeta0_prime = small_part + large_part + C64::new(-c_lead / n as f64 + EULER_GAMMA * c0, 0.0);
    Ok(ZetaResult {
        cut: a,
        zeta0: C64::new(c0, 0.0),
        zeta0_prime,
        small_factor: log_small.exp(),
        log_small_factor: log_small,
        torsion_log: zeta0_prime + log_small,
        err,
        small_count: cut.small.len(),
        non_unitary,
    })
}

/// `ζ_a(s)` for real `s > 0`, continued through the same Mellin split.
pub fn zeta_a(config: &TorusConfig, a: f64, s: f64) -> Result<C64, TorusError> {
    if !(s > 0.0) {
        return Err(TorusError::NotSupported);
    }
    let cut = cut_data(config, a)?;
    let w = config.number_weight();
    if w == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let n = config.n() as f64;
    let c_lead = w * config.volume() / libm::pow(2.0 * PI, n);
    let c0 = -w * cut.small.len() as f64;
    let (small_part, large_part, _) = mellin_pieces(config, &cut, s)?;
    let poles = c_lead / (s - n) + c0 / s;
    Ok((small_part + large_part + poles) / libm::tgamma(s))
}

/// `torsion_log` for one unitary factor from the Kronecker limit formula:
/// with `E(s) = Σ |(m+α)τ − (k+β)|^{−2s}`, `x_m = (m+α)τ₁ − β`,
/// `y_m = (m+α)τ₂`,
/// `E′(0) = 2πτ₂ B₂(α) − Σ_m log|1 − e^{2πi x_m − 2π|y_m|}|²`,
/// `E(0) = 0`, and `torsion_log = w E′(0)`.
pub fn epstein_torsion_log(config: &TorusConfig) -> Result<f64, TorusError> {
    if config.n() != 1 || !config.is_unitary() {
        return Err(TorusError::NotSupported);
    }
    let f = &config.factors[0];
    let (tau, alpha, beta) = (f.tau, f.alpha.re, f.beta.re);
    let b2 = alpha * alpha - alpha + 1.0 / 6.0;
    let term = |m: i64| {
        let a = m as f64 + alpha;
        let x = a * tau.re - beta;
        let y = (a * tau.im).abs();
        let r = libm::exp(-2.0 * PI * y);
        // |1 − q|² = 1 − 2 r cos(2πx) + r²
        libm::log1p(-2.0 * r * libm::cos(2.0 * PI * x) + r * r)
    };
    let mut sum = term(0);
    let mut d = 1;
    loop {
        let (u, v) = (term(d), term(-d));
        sum += u + v;
        if u.abs().max(v.abs()) < 1e-18 || d > 100_000 {
            break;
        }
        d += 1;
    }
    let e_prime = 2.0 * PI * tau.im * b2 - sum;
    Ok(config.number_weight() * e_prime)
}

/// Least-squares fit of `Σ_{j=−n}^{k} c_j t^j` to `h_a(t)` on a log grid in
/// `[t_hi/100, t_hi]`, `t_hi = min(0.1, ℓ²/80)` with `ℓ` the shortest period,
/// so image terms stay below `e^{−40}`; a diagnostic for the exact
/// coefficients used above.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionFit {
    /// `c_j` for `j = −n..=k` (real parts; the imaginary parts are fitted
    /// separately in `imag`).
    pub coeffs: Vec<f64>,
    pub imag: Vec<f64>,
    pub rms: f64,
    pub condition: f64,
}

impl ExpansionFit {
    /// Coefficient of `t^j`.
    pub fn coeff(&self, n: usize, j: i64) -> C64 {
        let i = (j + n as i64) as usize;
        C64::new(self.coeffs[i], self.imag[i])
    }
}

pub fn fit_small_t(config: &TorusConfig, a: f64, k: usize, samples: usize) -> Result<ExpansionFit, TorusError> {
    let n = config.n();
    let small: Vec<C64> = if a > 0.0 { cut_data(config, a)?.small } else { Vec::new() };
    let w = config.number_weight();
    let cols = n + k + 1;
    let shortest = config.factors.iter().map(|f| f.shortest_period_sq()).fold(f64::INFINITY, f64::min);
    let t_hi = (shortest / 80.0).min(0.1);
    let (lo, hi) = (libm::log(t_hi / 100.0), libm::log(t_hi));
    let mut design = Vec::with_capacity(samples * cols);
    let mut re = Vec::with_capacity(samples);
    let mut im = Vec::with_capacity(samples);
    for i in 0..samples {
        let t = libm::exp(lo + (hi - lo) * i as f64 / (samples - 1) as f64);
        let theta = config.heat_trace(t, HeatRoute::Image)?;
        let v = (theta - small.iter().map(|&mu| (-mu * t).exp()).sum::<C64>()) * w;
        for j in 0..cols {
            design.push(libm::pow(t, j as f64 - n as f64));
        }
        re.push(v.re);
        im.push(v.im);
    }
    let fr = numeric::least_squares(&design, samples, cols, &re)?;
    let fi = numeric::least_squares(&design, samples, cols, &im)?;
    Ok(ExpansionFit {
        coeffs: fr.coeffs,
        imag: fi.coeffs,
        rms: libm::sqrt(fr.rms_residual * fr.rms_residual + fi.rms_residual * fi.rms_residual),
        condition: fr.condition,
    })
}
