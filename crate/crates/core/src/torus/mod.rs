//! Flat complex tori `ℂⁿ/Λ` (products of one-dimensional factors) with flat
//! line bundles given by characters of the lattice.
//!
//! A factor has lattice `ℤ + τℤ`, metric `λ|dz|²` and holonomy
//! `χ(m + τk) = exp(2πi(αm + βk))`. Sections `e^{2πi(ax+by)}` with
//! `a = m + α`, `b = (k + β − aτ₁)/τ₂` diagonalize `□ = ½Δ`, with eigenvalue
//! `κ P P′`, where `κ = 2π²/(λτ₂²)`, `P = (m+α)τ − (k+β)` and
//! `P′ = (m+α)τ̄ − (k+β)`. For real `α, β` this is `κ|P|²`. Complex `α, β`
//! (non-unitary twists) are accepted behind [`TorusConfig::allow_non_unitary`].
//!
//! The fiber of `Λ(T*⁽⁰¹⁾) ⊗ Λᵖ(T*⁽¹⁰⁾)` is flat, so every degree `q` carries
//! the scalar spectrum with multiplicity `C(n,q) C(n,p)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::chern_weil::ChernWeilError;
use crate::numeric::NumericError;
use crate::scalar::C64;

mod variation;
mod zeta;

pub use variation::{
    a_minus_one_local, anomaly_check, clifford_matrices, d_squared_check, dbar_symbol, dirac_symbol, fiber_supertrace,
    log_torsion_derivative_fd, m0_extract, m0_fit, q1_operator, q2_operator, q_operator, scaling_theta_dot,
    variation_trace, AnomalyReport, DSquaredReport, LaurentFit,
};
pub use zeta::{epstein_torsion_log, fit_small_t, zeta_a, zeta_torsion, ExpansionFit, ZetaResult, EULER_GAMMA};

#[derive(Debug, Clone, PartialEq)]
pub enum TorusError {
    /// `Im τ ≤ 0`.
    InvalidModulus,
    InvalidScale,
    /// Character trivial on some factor: `□` has a zero mode.
    TrivialCharacter,
    /// Complex character entries without the non-unitary flag.
    NonUnitary,
    /// Real parts of `α, β` must lie in `[0, 1)`.
    CharacterRange,
    NoFactors,
    DegreeOutOfRange { degree: usize, dim: usize },
    /// No eigenvalue below the cutoff; carries the Weyl tail estimate at `t = 1`.
    EmptySpectrum { lmax: f64, tail: f64 },
    NonPositiveTime,
    NonPositiveCut,
    /// Spectral cut within `1e−9` of an eigenvalue's real part.
    CutTooClose { a: f64, eigenvalue: f64 },
    /// Eigenvalue with non-positive real part: the principal log branch is
    /// not consistent across the spectrum.
    BranchCut { eigenvalue: C64 },
    TruncationFailed { t: f64 },
    /// Sample grid must span at least one decade inside `(0, 1]`.
    ShortGrid,
    IllConditioned { condition: f64 },
    /// The Epstein route covers one unitary factor only.
    NotSupported,
    ChernWeil(ChernWeilError),
    Numeric(NumericError),
}

impl fmt::Display for TorusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TorusError::InvalidModulus => write!(f, "modulus must have positive imaginary part"),
            TorusError::InvalidScale => write!(f, "scale must be positive"),
            TorusError::TrivialCharacter => write!(f, "character is trivial on a factor (zero mode)"),
            TorusError::NonUnitary => write!(f, "complex character requires the non-unitary flag"),
            TorusError::CharacterRange => write!(f, "character real parts must lie in [0, 1)"),
            TorusError::NoFactors => write!(f, "torus needs at least one factor"),
            TorusError::DegreeOutOfRange { degree, dim } => write!(f, "degree {degree} outside 0..={dim}"),
            TorusError::EmptySpectrum { lmax, tail } => write!(f, "no eigenvalue below {lmax} (heat tail estimate {tail:e})"),
            TorusError::NonPositiveTime => write!(f, "time must be positive"),
            TorusError::NonPositiveCut => write!(f, "spectral cut must be positive"),
            TorusError::CutTooClose { a, eigenvalue } => write!(f, "cut {a} is within 1e-9 of eigenvalue {eigenvalue}"),
            TorusError::BranchCut { eigenvalue } => write!(f, "eigenvalue {eigenvalue} has non-positive real part"),
            TorusError::TruncationFailed { t } => write!(f, "lattice sum did not converge at t = {t}"),
            TorusError::ShortGrid => write!(f, "sample grid must span a decade inside (0, 1]"),
            TorusError::IllConditioned { condition } => write!(f, "fit is ill-conditioned (condition {condition:e})"),
            TorusError::NotSupported => write!(f, "route available for a single unitary factor only"),
            TorusError::ChernWeil(e) => write!(f, "{e}"),
            TorusError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TorusError {}

impl From<ChernWeilError> for TorusError {
    fn from(e: ChernWeilError) -> Self {
        TorusError::ChernWeil(e)
    }
}

impl From<NumericError> for TorusError {
    fn from(e: NumericError) -> Self {
        TorusError::Numeric(e)
    }
}

/// Lattice sums stop after this many rings.
const MAX_RING: i64 = 100_000;
/// Relative size below which a ring no longer matters.
const RING_TOL: f64 = 1e-18;

/// One complex dimension: `ℂ/(ℤ + τℤ)` with metric `λ|dz|²` and character `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusFactor {
    pub tau: C64,
    pub scale: f64,
    pub alpha: C64,
    pub beta: C64,
}

impl TorusFactor {
    pub fn new(tau: C64, scale: f64, alpha: f64, beta: f64) -> Self {
        TorusFactor { tau, scale, alpha: C64::new(alpha, 0.0), beta: C64::new(beta, 0.0) }
    }

    /// Same factor with complex character entries.
    pub fn non_unitary(tau: C64, scale: f64, alpha: C64, beta: C64) -> Self {
        TorusFactor { tau, scale, alpha, beta }
    }

    fn validate(&self, allow_non_unitary: bool) -> Result<(), TorusError> {
        if !(self.tau.im > 0.0) || !self.tau.re.is_finite() {
            return Err(TorusError::InvalidModulus);
        }
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(TorusError::InvalidScale);
        }
        if !allow_non_unitary && (self.alpha.im != 0.0 || self.beta.im != 0.0) {
            return Err(TorusError::NonUnitary);
        }
        let in_range = |x: f64| (0.0..1.0).contains(&x);
        if !in_range(self.alpha.re) || !in_range(self.beta.re) {
            return Err(TorusError::CharacterRange);
        }
        if self.alpha == C64::new(0.0, 0.0) && self.beta == C64::new(0.0, 0.0) {
            return Err(TorusError::TrivialCharacter);
        }
        Ok(())
    }

    pub fn is_unitary(&self) -> bool {
        self.alpha.im == 0.0 && self.beta.im == 0.0
    }

    /// `κ = 2π²/(λτ₂²)`.
    pub fn kappa(&self) -> f64 {
        2.0 * PI * PI / (self.scale * self.tau.im * self.tau.im)
    }

    /// Area `λτ₂`.
    pub fn volume(&self) -> f64 {
        self.scale * self.tau.im
    }

    /// Eigenvalue of `□` on the mode `(m, k)`.
    pub fn eigenvalue(&self, m: i64, k: i64) -> C64 {
        let a = self.alpha + m as f64;
        let b = self.beta + k as f64;
        let p = a * self.tau - b;
        let p2 = a * self.tau.conj() - b;
        p * p2 * self.kappa()
    }

    /// Wave vector of the mode `(m, k)` in orthonormal coordinates
    /// `w = √λ z`: `2π(a, b)/√λ`. Unitary characters only.
    pub fn wavevector(&self, m: i64, k: i64) -> [f64; 2] {
        let a = self.alpha.re + m as f64;
        let b = (self.beta.re + k as f64 - a * self.tau.re) / self.tau.im;
        let s = 2.0 * PI / libm::sqrt(self.scale);
        [s * a, s * b]
    }

    /// Inverse holonomy `χ(m + τk)^{−1}`.
    pub fn inverse_holonomy(&self, m: i64, k: i64) -> C64 {
        (C64::new(0.0, -2.0 * PI) * (self.alpha * m as f64 + self.beta * k as f64)).exp()
    }

    /// The same torus presented with modulus `−1/τ`: the lattice is rotated
    /// and rescaled by `−1/τ`, so the scale becomes `λ|τ|²` and the character
    /// becomes `(1 − β mod 1, α)`.
    pub fn modular_s(&self) -> Self {
        let tau = -C64::new(1.0, 0.0) / self.tau;
        let alpha = if self.beta == C64::new(0.0, 0.0) { self.beta } else { C64::new(1.0, 0.0) - self.beta };
        TorusFactor { tau, scale: self.scale * self.tau.norm_sqr(), alpha, beta: self.alpha }
    }

    pub fn with_scale(&self, scale: f64) -> Self {
        TorusFactor { scale, ..*self }
    }

    /// `θ(t) = Σ_{m,k} e^{−tμ(m,k)}` summed over eigenvalues.
    pub fn theta_eigen(&self, t: f64) -> Result<C64, TorusError> {
        let (tau, alpha, beta) = (self.tau, self.alpha, self.beta);
        let row = |m: i64| -> Result<C64, TorusError> {
            let a = alpha.re + m as f64;
            let center = libm::round(a * tau.re - beta.re) as i64;
            let term = |k: i64| (-self.eigenvalue(m, k) * t).exp();
            sum_outward(center, term).ok_or(TorusError::TruncationFailed { t })
        };
        sum_rows(libm::round(-alpha.re) as i64, row, t)
    }

    /// The same sum after Poisson summation:
    /// `θ(t) = (λτ₂/2πt)(1 + ε(t))`, `ε(t) = Σ_{γ≠0} χ(γ)^{−1} e^{−λ|γ|²/2t}`.
    pub fn theta_image(&self, t: f64) -> Result<C64, TorusError> {
        Ok((C64::new(1.0, 0.0) + self.image_excess(t)?) * (self.volume() / (2.0 * PI * t)))
    }

    /// `ε(t)` above.
    pub fn image_excess(&self, t: f64) -> Result<C64, TorusError> {
        let tau = self.tau;
        let lam = self.scale;
        let row = |k: i64| -> Result<C64, TorusError> {
            let center = libm::round(-(k as f64) * tau.re) as i64;
            let term = |m: i64| {
                let g = tau * k as f64 + m as f64;
                self.inverse_holonomy(m, k) * libm::exp(-lam * g.norm_sqr() / (2.0 * t))
            };
            sum_outward(center, term).ok_or(TorusError::TruncationFailed { t })
        };
        Ok(sum_rows(0, row, t)? - C64::new(1.0, 0.0))
    }

    /// `min λ|m + kτ|²` over nonzero periods.
    pub fn shortest_period_sq(&self) -> f64 {
        let mut best = 1.0f64;
        let mut k = 1i64;
        let h = self.tau.im;
        while (k * k) as f64 * h * h < best {
            let x = k as f64 * self.tau.re;
            for m in [libm::floor(-x) as i64, libm::ceil(-x) as i64] {
                best = best.min((self.tau * k as f64 + m as f64).norm_sqr());
            }
            k += 1;
        }
        self.scale * best
    }

    /// Modes `(m, k)` with `Re μ ≤ lmax`, unsorted.
    fn modes_below(&self, lmax: f64) -> Vec<(C64, i64, i64)> {
        let mut out = Vec::new();
        if !(lmax >= 0.0) {
            return out;
        }
        // Re μ ≥ κ(Re a)²τ₂² − κ(Im-part corrections), so widen the box for
        // complex characters.
        let slack = 2.0 + 4.0 * (self.alpha.im.abs() + self.beta.im.abs()) * (1.0 + self.tau.norm());
        let r = libm::sqrt(lmax / self.kappa()) + slack;
        let mr = (r / self.tau.im) as i64 + 2;
        let m0 = libm::round(-self.alpha.re) as i64;
        for m in m0 - mr..=m0 + mr {
            let a = self.alpha.re + m as f64;
            let center = libm::round(a * self.tau.re - self.beta.re) as i64;
            let kr = r as i64 + 2;
            for k in center - kr..=center + kr {
                let mu = self.eigenvalue(m, k);
                if mu.re <= lmax {
                    out.push((mu, m, k));
                }
            }
        }
        out
    }
}

/// Sum `f(c), f(c±1), …` until a term on each side drops below
/// `RING_TOL` times the running total. Terms must decay away from `c`.
fn sum_outward(c: i64, f: impl Fn(i64) -> C64) -> Option<C64> {
    let mut total = f(c);
    let (mut up, mut down) = (true, true);
    for d in 1..MAX_RING {
        if up {
            let v = f(c + d);
            total += v;
            up = v.norm() > RING_TOL * total.norm().max(1e-300);
        }
        if down {
            let v = f(c - d);
            total += v;
            down = v.norm() > RING_TOL * total.norm().max(1e-300);
        }
        if !up && !down {
            return Some(total);
        }
    }
    None
}

/// Sum of rows `r(c), r(c±1), …`; a side stops after two consecutive
/// negligible rows.
fn sum_rows(c: i64, r: impl Fn(i64) -> Result<C64, TorusError>, t: f64) -> Result<C64, TorusError> {
    let mut total = r(c)?;
    let (mut up, mut down) = (0, 0);
    for d in 1..MAX_RING {
        if up < 2 {
            let v = r(c + d)?;
            total += v;
            up = if v.norm() <= RING_TOL * total.norm().max(1e-300) { up + 1 } else { 0 };
        }
        if down < 2 {
            let v = r(c - d)?;
            total += v;
            down = if v.norm() <= RING_TOL * total.norm().max(1e-300) { down + 1 } else { 0 };
        }
        if up >= 2 && down >= 2 {
            return Ok(total);
        }
    }
    Err(TorusError::TruncationFailed { t })
}

/// Which evaluation of the scalar heat trace to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatRoute {
    /// Direct sum over eigenvalues.
    Eigen,
    /// Poisson-summed lattice image sum.
    Image,
}

/// Product torus with a holomorphic form degree `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusConfig {
    pub factors: Vec<TorusFactor>,
    pub p: usize,
    pub allow_non_unitary: bool,
}

impl TorusConfig {
    pub fn new(factors: Vec<TorusFactor>, p: usize) -> Result<Self, TorusError> {
        Self::build(factors, p, false)
    }

    /// Accepts complex characters; results are flagged as non-unitary.
    pub fn new_non_unitary(factors: Vec<TorusFactor>, p: usize) -> Result<Self, TorusError> {
        Self::build(factors, p, true)
    }

    fn build(factors: Vec<TorusFactor>, p: usize, allow_non_unitary: bool) -> Result<Self, TorusError> {
        if factors.is_empty() {
            return Err(TorusError::NoFactors);
        }
        for f in &factors {
            f.validate(allow_non_unitary)?;
        }
        if p > factors.len() {
            return Err(TorusError::DegreeOutOfRange { degree: p, dim: factors.len() });
        }
        Ok(TorusConfig { factors, p, allow_non_unitary })
    }

    /// Single factor, `p = 0`.
    pub fn single(tau: C64, scale: f64, alpha: f64, beta: f64) -> Result<Self, TorusError> {
        Self::new(vec![TorusFactor::new(tau, scale, alpha, beta)], 0)
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn volume(&self) -> f64 {
        self.factors.iter().map(|f| f.volume()).product()
    }

    pub fn is_unitary(&self) -> bool {
        self.factors.iter().all(|f| f.is_unitary())
    }

    /// Every factor's scale multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        TorusConfig { factors: self.factors.iter().map(|f| f.with_scale(f.scale * s)).collect(), ..self.clone() }
    }

    /// Multiplicity `C(n,q) C(n,p)` of the scalar spectrum in degree `q`.
    pub fn multiplicity(&self, q: usize) -> usize {
        binomial(self.n(), q) * binomial(self.n(), self.p)
    }

    /// `Σ_q (−1)^q q C(n,q) C(n,p)`: the weight of the scalar heat trace in
    /// `tr_s[N e^{−t□}]`. Zero for `n ≥ 2`.
    pub fn number_weight(&self) -> f64 {
        (0..=self.n())
            .map(|q| {
                let s = if q % 2 == 0 { 1.0 } else { -1.0 };
                s * q as f64 * self.multiplicity(q) as f64
            })
            .sum()
    }

    /// Scalar heat trace `Θ(t) = Tr e^{−t□}` on sections of the line bundle.
    pub fn heat_trace(&self, t: f64, route: HeatRoute) -> Result<C64, TorusError> {
        if !(t > 0.0) {
            return Err(TorusError::NonPositiveTime);
        }
        let mut out = C64::new(1.0, 0.0);
        for f in &self.factors {
            out *= match route {
                HeatRoute::Eigen => f.theta_eigen(t)?,
                HeatRoute::Image => f.theta_image(t)?,
            };
        }
        Ok(out)
    }

    /// `Θ(t) − vol/(2πt)ⁿ`, computed without cancellation from image sums.
    pub fn heat_excess(&self, t: f64) -> Result<C64, TorusError> {
        if !(t > 0.0) {
            return Err(TorusError::NonPositiveTime);
        }
        // Π(1 + ε_j) − 1 = Σ_j Π_{i<j}(1 + ε_i) ε_j
        let mut lead = 1.0;
        let mut acc = C64::new(0.0, 0.0);
        let mut run = C64::new(1.0, 0.0);
        for f in &self.factors {
            let e = f.image_excess(t)?;
            acc += run * e;
            run *= C64::new(1.0, 0.0) + e;
            lead *= f.volume() / (2.0 * PI * t);
        }
        Ok(acc * lead)
    }

    /// Eigenvalues of `□` on `Ω^{0,q}` up to `lmax`.
    pub fn spectrum(&self, q: usize, lmax: f64) -> Result<SpectrumSlice, TorusError> {
        if q > self.n() {
            return Err(TorusError::DegreeOutOfRange { degree: q, dim: self.n() });
        }
        let modes = self.modes_below(lmax);
        let tail = self.weyl_tail(lmax, 1.0);
        if modes.is_empty() {
            return Err(TorusError::EmptySpectrum { lmax, tail });
        }
        let mult = self.multiplicity(q);
        let mut values: Vec<C64> = modes.into_iter().map(|m| m.0).collect();
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut eigenvalues: Vec<(C64, usize)> = Vec::new();
        for v in values {
            match eigenvalues.last_mut() {
                Some((last, k)) if (*last - v).norm() <= 1e-10 * v.norm().max(1.0) => *k += mult,
                _ => eigenvalues.push((v, mult)),
            }
        }
        Ok(SpectrumSlice { q, eigenvalues, cutoff: lmax, tail_estimate: tail })
    }

    /// Product-torus modes with `Re μ ≤ lmax`: value and per-factor indices.
    pub fn modes_below(&self, lmax: f64) -> Vec<(C64, Vec<(i64, i64)>)> {
        let mut acc: Vec<(C64, Vec<(i64, i64)>)> = vec![(C64::new(0.0, 0.0), Vec::new())];
        for f in &self.factors {
            let list = f.modes_below(lmax);
            let mut next = Vec::new();
            for (v, idx) in &acc {
                for &(mu, m, k) in &list {
                    let s = *v + mu;
                    if s.re <= lmax {
                        let mut i = idx.clone();
                        i.push((m, k));
                        next.push((s, i));
                    }
                }
            }
            acc = next;
        }
        acc.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)).then(a.1.cmp(&b.1)));
        acc
    }

    /// Weyl estimate of `Σ_{Re μ > lmax} e^{−tμ}` from `N(μ) ≈ vol (μ/2π)ⁿ/n!`.
    pub fn weyl_tail(&self, lmax: f64, t: f64) -> f64 {
        let n = self.n() as i32;
        // ∫_L^∞ e^{−tμ} dN = vol/((2π)ⁿ (n−1)!) ∫_L^∞ μ^{n−1} e^{−tμ} dμ
        let mut inner = 0.0;
        let mut term = libm::exp(-t * lmax) / t;
        // ∫_L^∞ μ^{n−1}e^{−tμ} = e^{−tL} Σ_{j<n} (n−1)!/(n−1−j)! L^{n−1−j} / t^{j+1}
        let mut fact = 1.0;
        for j in 0..n {
            let pow = libm::pow(lmax.max(0.0), (n - 1 - j) as f64);
            inner += fact * pow * term;
            fact *= (n - 1 - j) as f64;
            term /= t;
        }
        let nm1: f64 = (1..n).map(|k| k as f64).product();
        self.volume() / libm::pow(2.0 * PI, n as f64) / nm1 * inner
    }

    /// Lowest real part of the spectrum.
    pub fn lowest_eigenvalue(&self) -> C64 {
        let mut lmax = 1.0;
        loop {
            let modes = self.modes_below(lmax);
            if let Some(first) = modes.first() {
                return first.0;
            }
            lmax *= 2.0;
        }
    }
}

/// Spectrum of `□` on `Ω^{0,q}` below a cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSlice {
    pub q: usize,
    /// `(value, multiplicity)` sorted by real part.
    pub eigenvalues: Vec<(C64, usize)>,
    pub cutoff: f64,
    /// Weyl estimate of the heat-trace tail beyond the cutoff at `t = 1`.
    pub tail_estimate: f64,
}

impl SpectrumSlice {
    /// Eigenvalues repeated by multiplicity.
    pub fn flat_values(&self) -> Vec<C64> {
        self.eigenvalues.iter().flat_map(|&(v, k)| core::iter::repeat_n(v, k)).collect()
    }
}

/// `tr_s[N e^{−t□}] = Σ_q (−1)^q q C(n,q) C(n,p) Θ(t)`.
pub fn heat_supertrace_n(config: &TorusConfig, t: f64, route: HeatRoute) -> Result<C64, TorusError> {
    Ok(config.heat_trace(t, route)? * config.number_weight())
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests;
