//! Heat-kernel parametrix with Grassmann-valued connections on flat models.
//!
//! The operator is `I'_t = −Σ_i (∂_i + ᵗω_i)² + ᵗρ` on a trivial bundle of
//! rank `m`, where `ᵗω = ψ_t(ω)` and `ᵗρ = ψ_t(ρ)`. On flat models `j ≡ 1`
//! and geodesics are straight lines, so the transport `τ^t` and the
//! coefficients `Φ_i` are polynomials in the displacement `v = x − y`
//! whenever `ω` and `ρ` are polynomial. They are computed exactly.

mod geometry;
mod j0;

pub use geometry::{Character, ModelGeometry, ModelKind};
pub use j0::{assemble_j0, assemble_j0_f64, conjugation_h, RescaledFlatOperator};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex;
use num_traits::Float;

use crate::algebra::{psi_t_sqrt, AlgebraError, GeneratorSpace, Multivector};
use crate::chern_weil::ChernWeilError;
use crate::linalg::Mat;
use crate::mehler::{ExpmForm, MehlerError};
use crate::numeric::{linear_fit, NumericError};
use crate::poly::Poly;
use crate::scalar::{cratio, cre, Real, Ring, C64};

#[derive(Debug, Clone, PartialEq)]
pub enum ParametrixError {
    Shape,
    /// `ω` has a term of auxiliary degree zero.
    OmegaHasDegreeZero,
    NonPositive,
    /// The two points are not joined by a minimizing segment inside the
    /// injectivity radius.
    TooFar { distance: f64, limit: f64 },
    /// The cutoff radius is not below the injectivity radius.
    CutoffTooLarge { eps: f64, limit: f64 },
    OrderTooHigh { requested: usize, max: usize },
    /// The exact kernel needs constant, pairwise commuting `ω_i` and `ρ`.
    NotConstant,
    NonCommuting,
    /// Image sum did not converge within the shell budget.
    TruncationFailed { u: f64 },
    TooFewSamples(usize),
    Algebra(AlgebraError),
    ChernWeil(ChernWeilError),
    Mehler(MehlerError),
    Numeric(NumericError),
}

impl fmt::Display for ParametrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParametrixError::Shape => write!(f, "inconsistent shapes"),
            ParametrixError::OmegaHasDegreeZero => write!(f, "connection form has an auxiliary-degree-zero term"),
            ParametrixError::NonPositive => write!(f, "parameter must be positive"),
            ParametrixError::TooFar { distance, limit } => write!(f, "points at distance {distance} exceed injectivity radius {limit}"),
            ParametrixError::CutoffTooLarge { eps, limit } => write!(f, "cutoff radius {eps} is not below injectivity radius {limit}"),
            ParametrixError::OrderTooHigh { requested, max } => write!(f, "order {requested} exceeds maximum {max}"),
            ParametrixError::NotConstant => write!(f, "exact kernel needs constant coefficients"),
            ParametrixError::NonCommuting => write!(f, "exact kernel needs commuting coefficients"),
            ParametrixError::TruncationFailed { u } => write!(f, "image sum did not converge at u = {u}"),
            ParametrixError::TooFewSamples(k) => write!(f, "regression needs at least 4 samples, got {k}"),
            ParametrixError::Algebra(e) => write!(f, "{e}"),
            ParametrixError::ChernWeil(e) => write!(f, "{e}"),
            ParametrixError::Mehler(e) => write!(f, "{e}"),
            ParametrixError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ParametrixError {}

impl From<AlgebraError> for ParametrixError {
    fn from(e: AlgebraError) -> Self {
        ParametrixError::Algebra(e)
    }
}

impl From<ChernWeilError> for ParametrixError {
    fn from(e: ChernWeilError) -> Self {
        ParametrixError::ChernWeil(e)
    }
}

impl From<MehlerError> for ParametrixError {
    fn from(e: MehlerError) -> Self {
        ParametrixError::Mehler(e)
    }
}

impl From<NumericError> for ParametrixError {
    fn from(e: NumericError) -> Self {
        ParametrixError::Numeric(e)
    }
}

/// Fiber endomorphisms with auxiliary coefficients.
pub type FiberMat<T> = Mat<Multivector<T>>;
/// Polynomials in space variables with [`FiberMat`] coefficients.
pub type FiberPoly<T> = Poly<FiberMat<T>>;

/// Largest `i_max` for [`phi_recursion`].
pub const MAX_PHI_ORDER: usize = 6;

/// `ᵗ∇ = d + ᵗω` and potential `ᵗρ` on the trivial bundle of rank `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamConnection<T: Real = f64> {
    space: GeneratorSpace,
    n: usize,
    m: usize,
    omega: Vec<FiberPoly<T>>,
    rho: FiberPoly<T>,
    sqrt_t: T,
}

fn fiber_zero<T: Real>(space: GeneratorSpace, m: usize) -> FiberMat<T> {
    Mat::filled(m, m, Multivector::zero(space))
}

fn fiber_identity<T: Real>(space: GeneratorSpace, m: usize) -> FiberMat<T> {
    Mat::identity_like(m, &Multivector::zero(space))
}

fn map_entries<T: Real>(a: &FiberMat<T>, f: impl Fn(&Multivector<T>) -> Multivector<T>) -> FiberMat<T> {
    a.map(f)
}

impl<T: Real> ParamConnection<T> {
    /// `omega[i]` is `ω(∂_i)` and `rho` the potential, both polynomial in the
    /// global coordinates `x`. `sqrt_t` is `√t` for the rescaling `ψ_t`.
    pub fn new(space: GeneratorSpace, m: usize, omega: Vec<FiberPoly<T>>, rho: FiberPoly<T>, sqrt_t: T) -> Result<Self, ParametrixError> {
        let n = omega.len();
        if !(sqrt_t > T::zero()) {
            return Err(ParametrixError::NonPositive);
        }
        let shape_ok = |p: &FiberPoly<T>| {
            p.nvars() == n && p.terms().all(|(_, c)| c.rows() == m && c.cols() == m && c.data().iter().all(|e| e.space() == space))
        };
        if !omega.iter().all(shape_ok) || !shape_ok(&rho) {
            return Err(ParametrixError::Shape);
        }
        for w in &omega {
            for (_, c) in w.terms() {
                for e in c.data() {
                    if e.terms().any(|(k, _)| space.aux_degree(k) == 0) {
                        return Err(ParametrixError::OmegaHasDegreeZero);
                    }
                }
            }
        }
        Ok(ParamConnection { space, n, m, omega, rho, sqrt_t })
    }

    /// Constant `ω_i` and `ρ`.
    pub fn constant(space: GeneratorSpace, omega: Vec<FiberMat<T>>, rho: FiberMat<T>, sqrt_t: T) -> Result<Self, ParametrixError> {
        let n = omega.len();
        let m = rho.rows();
        let omega = omega.into_iter().map(|w| Poly::constant(n, w)).collect();
        Self::new(space, m, omega, Poly::constant(n, rho), sqrt_t)
    }

    /// `ω = 0`, `ρ = 0` at `t = 1`.
    pub fn trivial(space: GeneratorSpace, n: usize, m: usize) -> Self {
        let z = fiber_zero(space, m);
        ParamConnection { space, n, m, omega: vec![Poly::zero(n, &z); n], rho: Poly::zero(n, &z), sqrt_t: T::one() }
    }

    pub fn space(&self) -> GeneratorSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn sqrt_t(&self) -> &T {
        &self.sqrt_t
    }

    /// Same data at another `√t`.
    pub fn with_sqrt_t(&self, sqrt_t: T) -> Result<Self, ParametrixError> {
        if !(sqrt_t > T::zero()) {
            return Err(ParametrixError::NonPositive);
        }
        Ok(ParamConnection { sqrt_t, ..self.clone() })
    }

    fn rescale(&self, p: &FiberPoly<T>) -> FiberPoly<T> {
        let s = self.sqrt_t.clone();
        p.map(|c| map_entries(c, |e| psi_t_sqrt(e, s.clone()).expect("positive √t")))
    }

    /// `ᵗω_i`.
    pub fn t_omega(&self) -> Vec<FiberPoly<T>> {
        self.omega.iter().map(|w| self.rescale(w)).collect()
    }

    /// `ᵗρ`.
    pub fn t_rho(&self) -> FiberPoly<T> {
        self.rescale(&self.rho)
    }

    pub fn is_constant(&self) -> bool {
        self.omega.iter().chain(core::iter::once(&self.rho)).all(|p| p.degree().unwrap_or(0) == 0)
    }
}

fn affine_images<T: Real>(y: &[T], nvars: usize, scale_var: Option<usize>) -> Vec<Poly<Complex<T>>> {
    // x_j ↦ y_j + v_j, or y_j + r v_j when `scale_var = Some(r)`
    let z: Complex<T> = cratio(0, 1);
    y.iter()
        .enumerate()
        .map(|(j, yj)| {
            let mut v = Poly::var(nvars, j, &z);
            if let Some(r) = scale_var {
                v = v.mul(&Poly::var(nvars, r, &z));
            }
            v.add(&Poly::constant(nvars, cre(yj.clone())))
        })
        .collect()
}

/// `A(s)` along the segment `r ↦ y + r v` as a polynomial in `(v_1..v_n, s)`:
/// the solution of `A' = −ᵗω(ẋ) A`, `A(0) = I`, i.e. the Dyson series.
pub fn transport_poly<T: Real>(conn: &ParamConnection<T>, y: &[T]) -> Result<FiberPoly<T>, ParametrixError> {
    let n = conn.n;
    if y.len() != n {
        return Err(ParametrixError::Shape);
    }
    let nv = n + 1;
    let images = affine_images(y, nv, Some(n));
    let z = fiber_zero::<T>(conn.space, conn.m);
    let mut along = Poly::zero(nv, &z);
    for (i, w) in conn.t_omega().iter().enumerate() {
        along = along.add(&w.compose(&images).mul_var(i));
    }
    let id = Poly::constant(nv, fiber_identity::<T>(conn.space, conn.m));
    let mut a = id.clone();
    for _ in 0..=conn.space.q_cap() + 1 {
        let next = id.sub(&along.mul(&a).antiderivative(n));
        if next == a {
            break;
        }
        a = next;
    }
    Ok(a)
}

/// `A(s)` for the segment from `y` to `x`.
pub fn dyson_transport<T: Real>(conn: &ParamConnection<T>, geom: &ModelGeometry, x: &[T], y: &[T], s: T) -> Result<FiberMat<T>, ParametrixError> {
    let v: Vec<T> = x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect();
    let d = Float::sqrt(v.iter().map(|c| c.to_f64() * c.to_f64()).sum::<f64>());
    if d >= geom.injectivity_radius() {
        return Err(ParametrixError::TooFar { distance: d, limit: geom.injectivity_radius() });
    }
    let mut point = v;
    point.push(s);
    Ok(transport_poly(conn, y)?.eval(&point))
}

/// Inverse of a unipotent fiber polynomial `I + N`.
fn unipotent_inverse<T: Real>(a: &FiberPoly<T>, space: GeneratorSpace, m: usize) -> FiberPoly<T> {
    let id = Poly::constant(a.nvars(), fiber_identity::<T>(space, m));
    let nil = id.sub(a);
    let mut out = id.clone();
    let mut power = id;
    loop {
        power = power.mul(&nil);
        if power.is_zero() {
            break;
        }
        out = out.add(&power);
    }
    out
}

/// Transport and the formal coefficients about a basepoint `y`, as
/// polynomials in `v = x − y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiSeries<T: Real = f64> {
    pub y: Vec<T>,
    /// `τ^t(x, y)`.
    pub tau: FiberPoly<T>,
    /// `Φ_0 .. Φ_{i_max}`.
    pub phi: Vec<FiberPoly<T>>,
}

/// `I'_t Φ` for `Φ` a polynomial in `v` with basepoint `y`.
pub fn apply_operator<T: Real>(conn: &ParamConnection<T>, y: &[T], phi: &FiberPoly<T>) -> FiberPoly<T> {
    let n = conn.n;
    let images = affine_images(y, n, None);
    let omega: Vec<FiberPoly<T>> = conn.t_omega().iter().map(|w| w.compose(&images)).collect();
    let rho = conn.t_rho().compose(&images);
    let cov = |i: usize, p: &FiberPoly<T>| p.deriv(i).add(&omega[i].mul(p));
    let mut out = rho.mul(phi);
    for i in 0..n {
        out = out.sub(&cov(i, &cov(i, phi)));
    }
    out
}

/// `Φ_0 = τ^t`, `Φ_i = −τ^t ∫₀¹ s^{i−1} (τ^t)^{−1}(I'_t Φ_{i−1})(sv) ds` with `j ≡ 1`.
pub fn phi_recursion<T: Real>(conn: &ParamConnection<T>, geom: &ModelGeometry, y: &[T], i_max: usize) -> Result<PhiSeries<T>, ParametrixError> {
    if i_max > MAX_PHI_ORDER {
        return Err(ParametrixError::OrderTooHigh { requested: i_max, max: MAX_PHI_ORDER });
    }
    if geom.dim() != conn.n {
        return Err(ParametrixError::Shape);
    }
    let n = conn.n;
    let tau = transport_poly(conn, y)?.eval_var(n, &T::one());
    let tau_inv = unipotent_inverse(&tau, conn.space, conn.m);
    let mut phi = vec![tau.clone()];
    for i in 1..=i_max {
        let q = tau_inv.mul(&apply_operator(conn, y, &phi[i - 1]));
        phi.push(tau.mul(&q.radial_solve(i)).neg());
    }
    Ok(PhiSeries { y: y.to_vec(), tau, phi })
}

/// Cutoff `ψ`: `1` below `ε²/4`, `0` above `ε²`, quintic smoothstep between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffSpec {
    eps: f64,
}

impl CutoffSpec {
    pub fn new(eps: f64, geom: &ModelGeometry) -> Result<Self, ParametrixError> {
        if !(eps > 0.0) {
            return Err(ParametrixError::NonPositive);
        }
        if eps >= geom.injectivity_radius() {
            return Err(ParametrixError::CutoffTooLarge { eps, limit: geom.injectivity_radius() });
        }
        Ok(CutoffSpec { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `ψ(s)` for `s = d²`.
    pub fn profile(&self, s: f64) -> f64 {
        let e2 = self.eps * self.eps;
        let r = ((s - 0.25 * e2) / (0.75 * e2)).clamp(0.0, 1.0);
        1.0 - r * r * r * (10.0 - 15.0 * r + 6.0 * r * r)
    }
}

/// `q_u(v) = (4πu)^{−n/2} e^{−|v|²/4u}`.
pub fn euclidean_heat(u: f64, v: &[f64]) -> f64 {
    let r2: f64 = v.iter().map(|c| c * c).sum();
    Float::powf(4.0 * core::f64::consts::PI * u, -0.5 * v.len() as f64) * Float::exp(-r2 / (4.0 * u))
}

/// `k^N_u(·, y) = ψ(d²) q_u Σ_{i≤N} u^i Φ_i` with the `Φ_i` precomputed.
#[derive(Debug, Clone)]
pub struct Parametrix {
    geom: ModelGeometry,
    cutoff: CutoffSpec,
    series: PhiSeries<f64>,
    order: usize,
    space: GeneratorSpace,
    m: usize,
}

impl Parametrix {
    pub fn new(conn: &ParamConnection<f64>, geom: &ModelGeometry, cutoff: CutoffSpec, order: usize, y: &[f64]) -> Result<Self, ParametrixError> {
        if order < 1 {
            return Err(ParametrixError::OrderTooHigh { requested: order, max: MAX_PHI_ORDER });
        }
        let series = phi_recursion(conn, geom, y, order)?;
        Ok(Parametrix { geom: geom.clone(), cutoff, series, order, space: conn.space, m: conn.m })
    }

    pub fn series(&self) -> &PhiSeries<f64> {
        &self.series
    }

    pub fn eval(&self, u: f64, x: &[f64]) -> Result<FiberMat<f64>, ParametrixError> {
        if !(u > 0.0) {
            return Err(ParametrixError::NonPositive);
        }
        let v = self.geom.reduce(&self.geom.displacement(x, &self.series.y));
        let d2: f64 = v.iter().map(|c| c * c).sum();
        let psi = self.cutoff.profile(d2);
        if psi == 0.0 {
            return Ok(fiber_zero(self.space, self.m));
        }
        let mut acc = fiber_zero(self.space, self.m);
        let mut up = 1.0;
        for i in 0..=self.order {
            acc = acc.add(&self.series.phi[i].eval(&v).scale(&C64::new(up, 0.0)));
            up *= u;
        }
        Ok(acc.scale(&C64::new(psi * euclidean_heat(u, &v), 0.0)))
    }
}

/// One-shot [`Parametrix::eval`].
#[allow(clippy::too_many_arguments)]
pub fn approximate_kernel(
    conn: &ParamConnection<f64>,
    geom: &ModelGeometry,
    cutoff: CutoffSpec,
    order: usize,
    u: f64,
    x: &[f64],
    y: &[f64],
) -> Result<FiberMat<f64>, ParametrixError> {
    Parametrix::new(conn, geom, cutoff, order, y)?.eval(u, x)
}

/// `e^{−N}` for a nilpotent fiber matrix, by the terminating series.
fn nilpotent_exp(nmat: &FiberMat<f64>, space: GeneratorSpace) -> FiberMat<f64> {
    let m = nmat.rows();
    let mut out = fiber_identity::<f64>(space, m);
    let mut term = out.clone();
    for k in 1.. {
        term = term.mul(nmat).scale(&C64::new(-1.0 / k as f64, 0.0));
        if term.is_zero() {
            break;
        }
        out = out.add(&term);
    }
    out
}

/// Image sum `Σ_λ χ(λ)^{−1} e^{−ᵗω·(x−y+λ)} q_u(x−y+λ) e^{−uᵗρ}` for constant,
/// commuting `ω_i`, `ρ`; sections satisfy `f(x+λ) = χ(λ) f(x)`.
#[derive(Debug, Clone)]
pub struct ExactFlatKernel {
    geom: ModelGeometry,
    chi: Character,
    omega: Vec<FiberMat<f64>>,
    rho: FiberMat<f64>,
    space: GeneratorSpace,
}

impl ExactFlatKernel {
    pub fn new(geom: &ModelGeometry, conn: &ParamConnection<f64>, chi: Character) -> Result<Self, ParametrixError> {
        if !conn.is_constant() {
            return Err(ParametrixError::NotConstant);
        }
        if geom.dim() != conn.n || chi.dim() != conn.n {
            return Err(ParametrixError::Shape);
        }
        let zero_v = vec![0u8; conn.n];
        let omega: Vec<FiberMat<f64>> = conn.t_omega().iter().map(|w| w.coeff(&zero_v)).collect();
        let rho = conn.t_rho().coeff(&zero_v);
        for a in omega.iter().chain(core::iter::once(&rho)) {
            for b in omega.iter().chain(core::iter::once(&rho)) {
                if a.commutator(b).max_abs() > 1e-14 {
                    return Err(ParametrixError::NonCommuting);
                }
            }
        }
        Ok(ExactFlatKernel { geom: geom.clone(), chi, omega, rho, space: conn.space })
    }

    pub fn eval(&self, u: f64, x: &[f64], y: &[f64]) -> Result<FiberMat<f64>, ParametrixError> {
        if !(u > 0.0) {
            return Err(ParametrixError::NonPositive);
        }
        let m = self.rho.rows();
        let d = self.geom.displacement(x, y);
        let space = self.space;
        let sum = self.geom.image_sum(u, |k, lam| {
            let w: Vec<f64> = d.iter().zip(lam).map(|(a, b)| a + b).collect();
            let g = euclidean_heat(u, &w);
            let mut wo = fiber_zero::<f64>(space, m);
            for (oi, wi) in self.omega.iter().zip(&w) {
                wo = wo.add(&oi.scale(&C64::new(*wi, 0.0)));
            }
            nilpotent_exp(&wo, space).scale(&(self.chi.value(k).conj() * g))
        })?;
        let erho = f64::expm_form(&crate::chern_weil::FormMatrix::from_mat(space, self.rho.scale(&C64::new(-u, 0.0)))?)?;
        Ok(sum.mul(erho.as_mat()))
    }
}

/// `∫_M tr K_u(x, x) dx` for `ω = ρ = 0`: `vol · Σ_λ χ(λ)^{−1} q_u(λ)`.
pub fn heat_trace_images(geom: &ModelGeometry, chi: &Character, u: f64) -> Result<C64, ParametrixError> {
    let s = geom.image_sum(u, |k, lam| chi.value(k).conj() * euclidean_heat(u, lam))?;
    Ok(s * geom.volume())
}

/// `Σ_k e^{−u|k|²}` over the twisted dual lattice `k ∈ 2π Λ^{−ᵀ}(ℤⁿ + α)`.
pub fn heat_trace_spectral(geom: &ModelGeometry, chi: &Character, u: f64) -> Result<f64, ParametrixError> {
    geom.dual_sum(u, chi, |k2| Float::exp(-u * k2))
}

/// Outcome of the error-order regression.
#[derive(Debug, Clone, PartialEq)]
pub enum ErrorFit {
    /// `log err ≈ slope · log s + intercept`.
    Slope { slope: f64, intercept: f64, samples: Vec<(f64, f64)> },
    /// Errors sit at round-off for every sample.
    SuperPolynomial { max_error: f64 },
}

impl ErrorFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            ErrorFit::Slope { slope, .. } => Some(*slope),
            ErrorFit::SuperPolynomial { .. } => None,
        }
    }
}

/// Points `y + v` with `v` on a `(2r+1)ⁿ` grid of spacing `ε/(4r)`, inside
/// the plateau of the cutoff.
pub fn plateau_grid(y: &[f64], cutoff: &CutoffSpec, r: usize) -> Vec<Vec<f64>> {
    let n = y.len();
    let h = cutoff.eps() / (4.0 * r.max(1) as f64);
    let side = 2 * r + 1;
    let total = side.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut p = y.to_vec();
            for c in p.iter_mut() {
                *c += h * ((idx % side) as f64 - r as f64);
                idx /= side;
            }
            p
        })
        .collect()
}

/// Sup-norm (max over matrix entries and auxiliary coefficients) of
/// `p_u − k^N_u` over `points`, for `u = s t` and each `s`; then a log-log
/// fit in `s`.
#[allow(clippy::too_many_arguments)]
pub fn error_order_fit(
    conn: &ParamConnection<f64>,
    geom: &ModelGeometry,
    cutoff: CutoffSpec,
    order: usize,
    s_values: &[f64],
    t: f64,
    y: &[f64],
    points: &[Vec<f64>],
) -> Result<ErrorFit, ParametrixError> {
    if s_values.len() < 4 {
        return Err(ParametrixError::TooFewSamples(s_values.len()));
    }
    let par = Parametrix::new(conn, geom, cutoff, order, y)?;
    let exact = ExactFlatKernel::new(geom, conn, Character::trivial(geom.dim()))?;
    let mut samples = Vec::with_capacity(s_values.len());
    let mut scale: f64 = 0.0;
    for &s in s_values {
        let u = s * t;
        let mut err: f64 = 0.0;
        for x in points {
            let p = exact.eval(u, x, y)?;
            let k = par.eval(u, x)?;
            scale = scale.max(p.max_abs());
            err = err.max(p.sub(&k).max_abs());
        }
        samples.push((s, err));
    }
    let max_error = samples.iter().map(|p| p.1).fold(0.0, f64::max);
    if samples.iter().all(|p| p.1 <= 1e-12 * scale) {
        return Ok(ErrorFit::SuperPolynomial { max_error });
    }
    let xs: Vec<f64> = samples.iter().map(|p| Float::ln(p.0)).collect();
    let ys: Vec<f64> = samples.iter().map(|p| Float::ln(p.1.max(f64::MIN_POSITIVE))).collect();
    let (slope, intercept) = linear_fit(&xs, &ys)?;
    Ok(ErrorFit::Slope { slope, intercept, samples })
}

/// `max` of the norm over matrix entries and auxiliary coefficients.
pub fn aux_norm(a: &FiberMat<f64>) -> f64 {
    Ring::max_abs(a)
}
