//! Fiberwise operators on `Λ(T*⁽⁰¹⁾) ⊗ Λᵖ(T*⁽¹⁰⁾)`, the variation trace
//! `tr_s[Q e^{−t□}]`, its Laurent fit, and the anomaly comparison.
//!
//! Frame `e_{2j}, e_{2j+1}` (zero-based) with `J e_{2j} = e_{2j+1}`,
//! `ω_j = (e_{2j} − i e_{2j+1})/√2`. On `Λ(ℂⁿ)` with creation `a_j† = w̄_j∧`
//! and annihilation `a_j = i_{ω̄_j}`, the Clifford action is
//! `c(e_{2j}) = a_j† − a_j`, `c(e_{2j+1}) = i(a_j† + a_j)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use super::{binomial, zeta_torsion, HeatRoute, TorusConfig, TorusError};
use crate::algebra::{GeneratorSpace, Multivector};
use crate::chern_weil::{self, CurvatureData, FormMatrix, ModelVolume, QuadSpec};
use crate::linalg::Mat;
use crate::numeric;
use crate::scalar::C64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

const I: C64 = C64::new(0.0, 1.0);

/// Jordan–Wigner sign for acting with mode `j` on basis mask `mask`.
fn jw_sign(mask: usize, j: usize) -> f64 {
    if (mask & ((1 << j) - 1)).count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Creation operators `a_j†` on `Λ(ℂⁿ)`, basis indexed by bitmask.
fn creation(n: usize) -> Vec<Mat<C64>> {
    let dim = 1 << n;
    (0..n)
        .map(|j| {
            let mut m = Mat::<C64>::zeros(dim, dim);
            for mask in 0..dim {
                if mask & (1 << j) == 0 {
                    m.set(mask | (1 << j), mask, c(jw_sign(mask, j)));
                }
            }
            m
        })
        .collect()
}

/// `c(e_i)` for `i = 0..2n` on `Λ(ℂⁿ)`.
pub fn clifford_matrices(n: usize) -> Vec<Mat<C64>> {
    let mut out = Vec::with_capacity(2 * n);
    for a in creation(n) {
        let ad = a.conj_transpose();
        out.push(a.sub(&ad));
        out.push(a.add(&ad).scale(&I));
    }
    out
}

/// Complex structure on the frame: `J e_{2j} = e_{2j+1}`.
fn j_matrix(n: usize) -> Mat<C64> {
    let mut j = Mat::<C64>::zeros(2 * n, 2 * n);
    for k in 0..n {
        j.set(2 * k + 1, 2 * k, c(1.0));
        j.set(2 * k, 2 * k + 1, c(-1.0));
    }
    j
}

/// `Θ̇(e_i, e_j)` for the scaling family `g_ℓ = e^ℓ g`: `Θ̇ = Θ`,
/// `Θ(e_i, e_j) = g(J e_i, e_j)`.
pub fn scaling_theta_dot(n: usize) -> Mat<C64> {
    j_matrix(n).transpose()
}

/// `Q₁ = (i/4) Σ Θ̇(e_i,e_j) c(e_i)c(e_j) + ¼ Σ Θ̇(e_i, J e_i)` on `Λ(ℂⁿ)`.
pub fn q1_operator(theta_dot: &Mat<C64>) -> Mat<C64> {
    let n = theta_dot.rows() / 2;
    let cl = clifford_matrices(n);
    let j = j_matrix(n);
    let dim = 1 << n;
    let mut out = Mat::<C64>::zeros(dim, dim);
    for a in 0..2 * n {
        for b in 0..2 * n {
            let t = *theta_dot.get(a, b);
            if t != c(0.0) {
                out = out.add(&cl[a].mul(&cl[b]).scale(&(I * 0.25 * t)));
            }
        }
    }
    let mut scalar = c(0.0);
    for a in 0..2 * n {
        for k in 0..2 * n {
            scalar += *theta_dot.get(a, k) * *j.get(k, a);
        }
    }
    out.add(&Mat::identity(dim).scale(&(scalar * 0.25)))
}

/// Masks of `Λᵖ(ℂⁿ)` in increasing order.
fn degree_masks(n: usize, p: usize) -> Vec<usize> {
    (0..1usize << n).filter(|m| m.count_ones() as usize == p).collect()
}

/// `Q₂ = i Σ Θ̇(ω_j, ω̄_i) ω^j∧ i_{ω_i}` on `Λᵖ(T*⁽¹⁰⁾)`.
pub fn q2_operator(theta_dot: &Mat<C64>, p: usize) -> Mat<C64> {
    let n = theta_dot.rows() / 2;
    let masks = degree_masks(n, p);
    let index = |m: usize| masks.iter().position(|&x| x == m).unwrap();
    let omega = |j: usize, bar: bool| {
        let mut v = vec![c(0.0); 2 * n];
        v[2 * j] = c(FRAC_1_SQRT_2);
        v[2 * j + 1] = C64::new(0.0, if bar { FRAC_1_SQRT_2 } else { -FRAC_1_SQRT_2 });
        v
    };
    let pair = |x: &[C64], y: &[C64]| {
        let mut s = c(0.0);
        for a in 0..2 * n {
            for b in 0..2 * n {
                s += x[a] * y[b] * *theta_dot.get(a, b);
            }
        }
        s
    };
    let dim = masks.len();
    let mut out = Mat::<C64>::zeros(dim, dim);
    for (col, &mask) in masks.iter().enumerate() {
        for i in 0..n {
            if mask & (1 << i) == 0 {
                continue;
            }
            let s1 = jw_sign(mask, i);
            let m1 = mask & !(1 << i);
            for j in 0..n {
                if m1 & (1 << j) != 0 {
                    continue;
                }
                let s2 = jw_sign(m1, j);
                let row = index(m1 | (1 << j));
                let coef = I * pair(&omega(j, false), &omega(i, true)) * (s1 * s2);
                let v = *out.get(row, col) + coef;
                out.set(row, col, v);
            }
        }
    }
    out
}

fn kron(a: &Mat<C64>, b: &Mat<C64>) -> Mat<C64> {
    let (ra, rb) = (a.rows(), b.rows());
    Mat::from_fn(ra * rb, ra * rb, |i, j| *a.get(i / rb, j / rb) * *b.get(i % rb, j % rb))
}

/// `Q = Q₁ ⊗ 1 + 1 ⊗ Q₂` on `Λ(ℂⁿ) ⊗ Λᵖ(ℂⁿ)`.
pub fn q_operator(theta_dot: &Mat<C64>, p: usize) -> Mat<C64> {
    let n = theta_dot.rows() / 2;
    let q1 = q1_operator(theta_dot);
    let q2 = q2_operator(theta_dot, p);
    kron(&q1, &Mat::identity(binomial(n, p))).add(&kron(&Mat::identity(1 << n), &q2))
}

/// Supertrace on `Λ(ℂⁿ) ⊗ Λᵖ(ℂⁿ)`, graded by the antiholomorphic degree.
pub fn fiber_supertrace(op: &Mat<C64>, n: usize, p: usize) -> C64 {
    let dp = binomial(n, p);
    let mut s = c(0.0);
    for i in 0..op.rows() {
        let q = (i / dp).count_ones();
        let v = *op.get(i, i);
        s += if q.is_multiple_of(2) { v } else { -v };
    }
    s
}

fn heat(config: &TorusConfig, t: f64) -> Result<C64, TorusError> {
    config.heat_trace(t, if t < 1.0 { HeatRoute::Image } else { HeatRoute::Eigen })
}

/// `tr_s[Q e^{−t□}]` for the scaling family at the configuration's metric.
/// `Q` is constant on the fiber, so this is `str(Q) Θ(t)`.
pub fn variation_trace(config: &TorusConfig, t: f64) -> Result<C64, TorusError> {
    let n = config.n();
    let q = q_operator(&scaling_theta_dot(n), config.p);
    Ok(fiber_supertrace(&q, n, config.p) * heat(config, t)?)
}

/// Local prediction of the `t^{−1}` coefficient of `tr_s[(Q₁⊗1) e^{−t□}]`:
/// `(−2i)ⁿ (2π)^{−n} ∫ [(i/2) Θ̇ td_p(R⁺) tr exp(−R^E)]^{top}` with
/// `R⁺ = R^E = 0`. The `(−2i)ⁿ` is the Clifford supertrace of the top
/// monomial and `(2π)^{−n}` the heat-kernel density of `e^{−t□}` in real
/// dimension `2n`.
pub fn a_minus_one_local(config: &TorusConfig) -> Result<C64, TorusError> {
    let n = config.n();
    let space = GeneratorSpace::frame(2 * n).map_err(chern_weil::ChernWeilError::from)?;
    let th = scaling_theta_dot(n);
    let mut form = Multivector::zero(space);
    for a in 0..2 * n {
        for b in a + 1..2 * n {
            let e = Multivector::e(space, a).wedge(&Multivector::e(space, b)).map_err(chern_weil::ChernWeilError::from)?;
            form = form + e.scale(th.get(a, b));
        }
    }
    let td = chern_weil::td_p(config.p, &FormMatrix::zeros(space, n))?;
    let tr = chern_weil::trace_exp(&FormMatrix::<f64>::zeros(space, 1))?;
    let integrand = form.scale(&(I * 0.5)).wedge(&td).map_err(chern_weil::ChernWeilError::from)?.wedge(&tr).map_err(chern_weil::ChernWeilError::from)?;
    let integral = chern_weil::integrate_top(&integrand, &ModelVolume { real_dim: 2 * n, volume: config.volume() })?;
    let norm = C64::new(0.0, -2.0).powi(n as i32) / libm::pow(2.0 * PI, n as f64);
    Ok(integral * norm)
}

/// Laurent fit `Σ_{j=−n}^{k} M_j t^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentFit {
    pub n: usize,
    /// `M_j`, `j = −n..=k`.
    pub coeffs: Vec<C64>,
    pub rms: f64,
    pub condition: f64,
}

impl LaurentFit {
    pub fn coeff(&self, j: i64) -> C64 {
        self.coeffs[(j + self.n as i64) as usize]
    }

    pub fn m0(&self) -> C64 {
        self.coeff(0)
    }
}

/// Fit sampled values; the grid must span a decade inside `(0, 1]`.
pub fn m0_fit(ts: &[f64], values: &[C64], n: usize, k: usize) -> Result<LaurentFit, TorusError> {
    if ts.len() != values.len() || ts.iter().any(|&t| !(t > 0.0 && t <= 1.0)) {
        return Err(TorusError::ShortGrid);
    }
    let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ts.iter().cloned().fold(0.0, f64::max);
    if hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(TorusError::ShortGrid);
    }
    let cols = n + k + 1;
    let design: Vec<f64> = ts.iter().flat_map(|&t| (0..cols).map(move |j| libm::pow(t, j as f64 - n as f64))).collect();
    let re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = values.iter().map(|v| v.im).collect();
    let fr = numeric::least_squares(&design, ts.len(), cols, &re)?;
    let fi = numeric::least_squares(&design, ts.len(), cols, &im)?;
    if !(fr.condition < 1e13) {
        return Err(TorusError::IllConditioned { condition: fr.condition });
    }
    let coeffs = fr.coeffs.iter().zip(&fi.coeffs).map(|(a, b)| C64::new(*a, *b)).collect();
    let rms = libm::sqrt(fr.rms_residual * fr.rms_residual + fi.rms_residual * fi.rms_residual);
    Ok(LaurentFit { n, coeffs, rms, condition: fr.condition })
}

/// Sample [`variation_trace`] on `ts` and fit with `k` regular terms.
pub fn m0_extract(config: &TorusConfig, ts: &[f64], k: usize) -> Result<LaurentFit, TorusError> {
    let values = ts.iter().map(|&t| variation_trace(config, t)).collect::<Result<Vec<_>, _>>()?;
    m0_fit(ts, &values, config.n(), k)
}

/// Cut below the whole spectrum, so the small complex is empty.
fn default_cut(config: &TorusConfig) -> f64 {
    0.5 * config.lowest_eigenvalue().re
}

/// Central difference `∂/∂ℓ torsion_log` at `ℓ = 0` for `g_ℓ = e^ℓ g`.
pub fn log_torsion_derivative_fd(config: &TorusConfig, h: f64) -> Result<C64, TorusError> {
    let up = config.scaled(libm::exp(h));
    let down = config.scaled(libm::exp(-h));
    let a = zeta_torsion(&up, default_cut(&up))?.torsion_log;
    let b = zeta_torsion(&down, default_cut(&down))?.torsion_log;
    Ok((a - b) / (2.0 * h))
}

/// Both sides of the anomaly formula for the flat scaling family.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyReport {
    pub scale0: f64,
    pub scale1: f64,
    /// `torsion_log(scale1) − torsion_log(scale0)`.
    pub lhs: C64,
    /// `∫_M ϖ` for the family.
    pub rhs: C64,
    pub lhs_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub non_unitary: bool,
}

pub fn anomaly_check(config: &TorusConfig, scale0: f64, scale1: f64, tol: f64) -> Result<AnomalyReport, TorusError> {
    if !(scale0 > 0.0 && scale1 > 0.0) {
        return Err(TorusError::InvalidScale);
    }
    let c0 = config.scaled(scale0);
    let c1 = config.scaled(scale1);
    let z0 = zeta_torsion(&c0, default_cut(&c0))?;
    let z1 = zeta_torsion(&c1, default_cut(&c1))?;
    let lhs = z1.torsion_log - z0.torsion_log;
    let n = config.n();
    let space = GeneratorSpace::frame(2 * n).map_err(chern_weil::ChernWeilError::from)?;
    let data = CurvatureData::flat_scaling(space, 1)?;
    let family = |_l: f64| data.clone();
    let spec = QuadSpec { l0: libm::log(scale0), l1: libm::log(scale1), ..QuadSpec::default() };
    let form = chern_weil::transgression_form(family, config.p, &spec)?;
    let rhs = chern_weil::integrate_top(&form, &ModelVolume { real_dim: 2 * n, volume: c0.volume() })?;
    let pass = (lhs - rhs).norm() < tol;
    Ok(AnomalyReport { scale0, scale1, lhs, rhs, lhs_err: z0.err + z1.err, tol, pass, non_unitary: !config.is_unitary() })
}

/// `∂̄` symbol `Σ_j a_j† · i(k_{2j} + i k_{2j+1})/√2` on a Fourier mode with
/// wave vector `k` in orthonormal coordinates.
pub fn dbar_symbol(k: &[f64]) -> Mat<C64> {
    let n = k.len() / 2;
    let mut out = Mat::<C64>::zeros(1 << n, 1 << n);
    for (j, a) in creation(n).into_iter().enumerate() {
        let kb = I * C64::new(k[2 * j], k[2 * j + 1]) * FRAC_1_SQRT_2;
        out = out.add(&a.scale(&kb));
    }
    out
}

/// Dirac symbol `Σ_i c(e_i) · i k_i`.
pub fn dirac_symbol(k: &[f64]) -> Mat<C64> {
    let n = k.len() / 2;
    let cl = clifford_matrices(n);
    let mut out = Mat::<C64>::zeros(1 << n, 1 << n);
    for (ci, &ki) in cl.iter().zip(k) {
        out = out.add(&ci.scale(&(I * ki)));
    }
    out
}

/// Maximum deviations over the lowest Fourier modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DSquaredReport {
    pub modes: usize,
    /// `‖D − √2(∂̄ + ∂̄*)‖`.
    pub dirac_vs_dolbeault: f64,
    /// `‖D² − 2□‖ / max(1, μ)`.
    pub d_squared_vs_two_box: f64,
    /// `‖□ − μ‖ / max(1, μ)`, against the closed-form eigenvalue.
    pub box_vs_eigenvalue: f64,
}

pub fn d_squared_check(config: &TorusConfig, modes: usize) -> Result<DSquaredReport, TorusError> {
    if !config.is_unitary() {
        return Err(TorusError::NotSupported);
    }
    let mut lmax = 10.0;
    let list = loop {
        let l = config.modes_below(lmax);
        if l.len() >= modes {
            break l;
        }
        lmax *= 2.0;
    };
    let mut rep = DSquaredReport { modes, dirac_vs_dolbeault: 0.0, d_squared_vs_two_box: 0.0, box_vs_eigenvalue: 0.0 };
    for (mu, idx) in list.iter().take(modes) {
        let k: Vec<f64> = config.factors.iter().zip(idx).flat_map(|(f, &(m, kk))| f.wavevector(m, kk)).collect();
        let d = dirac_symbol(&k);
        let db = dbar_symbol(&k);
        let dbs = db.conj_transpose();
        let bx = db.mul(&dbs).add(&dbs.mul(&db));
        let scale = mu.norm().max(1.0);
        let id = Mat::identity(bx.rows());
        rep.dirac_vs_dolbeault = rep.dirac_vs_dolbeault.max(d.sub(&db.add(&dbs).scale(&c(SQRT_2))).max_abs());
        rep.d_squared_vs_two_box = rep.d_squared_vs_two_box.max(d.mul(&d).sub(&bx.scale(&c(2.0))).max_abs() / scale);
        rep.box_vs_eigenvalue = rep.box_vs_eigenvalue.max(bx.sub(&id.scale(mu)).max_abs() / scale);
    }
    Ok(rep)
}
