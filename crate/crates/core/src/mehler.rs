//! Generalized Mehler kernel for `H = −Σ_i (∂_i + ¼ B_ij x_j)² + L`.
//!
//! With `C = ½(B + Bᵀ)`, `𝒟 = ½(B − Bᵀ)` and `q_u(x) = (4πu)^{−n/2} e^{−|x|²/4u}`,
//!
//! `p_u(x) = (4πu)^{−n/2} Â(u𝒟) e^{−⅛ xᵀCx} e^{−(1/4u) xᵀ g(u𝒟) x} e^{−uL} a₀`
//!
//! where `g(z) = (z/2) coth(z/2)`. The symmetric part is a gauge:
//! `∂_i + ¼(Bx)_i = γ⁻¹ (∂_i + ¼(𝒟x)_i) γ` with `γ = e^{⅛ xᵀCx}`.
//!
//! The formal solution is `p_u = q_u γ⁻¹ Σ_k u^k Ψ_k` with `Ψ₀ = a₀` and
//! `(k + x·∇) Ψ_k = −H_𝒟 Ψ_{k−1}`; [`formal_coeffs`] returns the `Ψ_k` and
//! [`taylor_coeffs`] expands the closed form in `u` independently.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex;
use num_traits::Float;

use crate::chern_weil::{self, form_expm, mat_series, ChernWeilError, FormMatrix, ScalarSeries};
use crate::algebra::{GeneratorSpace, Multivector};
use crate::linalg::Mat;
use crate::numeric::{jacobi_eigen, NumericError};
use crate::poly::Poly;
use crate::scalar::{cratio, crational, cre, Rational, Real, Ring, C64};
use crate::series;

#[derive(Debug, Clone, PartialEq)]
pub enum MehlerError {
    NonPositiveTime,
    Shape,
    /// The skew part has both a numeric and a nilpotent component.
    MixedSkewPart,
    /// A numeric skew part must be real.
    ComplexSkewPart,
    /// `u𝒟` has a rotation angle at or beyond `2π`.
    OutsideConvergence,
    ChernWeil(ChernWeilError),
    Numeric(NumericError),
}

impl fmt::Display for MehlerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MehlerError::NonPositiveTime => write!(f, "time must be positive"),
            MehlerError::Shape => write!(f, "inconsistent shapes"),
            MehlerError::MixedSkewPart => write!(f, "skew part mixes numeric and nilpotent entries"),
            MehlerError::ComplexSkewPart => write!(f, "numeric skew part is not real"),
            MehlerError::OutsideConvergence => write!(f, "rotation angle of u𝒟 reaches 2π"),
            MehlerError::ChernWeil(e) => write!(f, "{e}"),
            MehlerError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MehlerError {}

impl From<ChernWeilError> for MehlerError {
    fn from(e: ChernWeilError) -> Self {
        MehlerError::ChernWeil(e)
    }
}

impl From<NumericError> for MehlerError {
    fn from(e: NumericError) -> Self {
        MehlerError::Numeric(e)
    }
}

impl From<crate::algebra::AlgebraError> for MehlerError {
    fn from(e: crate::algebra::AlgebraError) -> Self {
        MehlerError::ChernWeil(e.into())
    }
}

/// Data of the oscillator. Entries of `b` and `l` are assumed to commute.
#[derive(Debug, Clone, PartialEq)]
pub struct MehlerParams<T: Real = f64> {
    n: usize,
    m: usize,
    b: FormMatrix<T>,
    l: FormMatrix<T>,
    a0: Mat<Complex<T>>,
}

impl<T: Real> MehlerParams<T> {
    pub fn new(b: FormMatrix<T>, l: FormMatrix<T>, a0: Mat<Complex<T>>) -> Result<Self, MehlerError> {
        let m = l.dim();
        if b.space() != l.space() || a0.rows() != m || a0.cols() != m {
            return Err(MehlerError::Shape);
        }
        Ok(MehlerParams { n: b.dim(), m, b, l, a0 })
    }

    /// `B = 0`, `L = 0`, `a₀ = I_m`.
    pub fn euclidean(space: GeneratorSpace, n: usize, m: usize) -> Self {
        MehlerParams { n, m, b: FormMatrix::zeros(space, n), l: FormMatrix::zeros(space, m), a0: Mat::identity(m) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn space(&self) -> GeneratorSpace {
        self.b.space()
    }

    pub fn b(&self) -> &FormMatrix<T> {
        &self.b
    }

    pub fn l(&self) -> &FormMatrix<T> {
        &self.l
    }

    pub fn a0(&self) -> &Mat<Complex<T>> {
        &self.a0
    }

    /// `C = ½(B + Bᵀ)`.
    pub fn symmetric_part(&self) -> FormMatrix<T> {
        self.b.add(&self.b.transpose()).scale(&cratio(1, 2))
    }

    /// `𝒟 = ½(B − Bᵀ)`.
    pub fn skew_part(&self) -> FormMatrix<T> {
        self.b.sub(&self.b.transpose()).scale(&cratio(1, 2))
    }

    /// Same oscillator with `B` replaced by `B − 2𝒟` (that is `𝒟 ↦ −𝒟`).
    pub fn with_flipped_skew(&self) -> Self {
        let b = self.symmetric_part().sub(&self.skew_part());
        MehlerParams { b, ..self.clone() }
    }

    /// `e^{−uL} a₀` as a matrix of forms.
    fn propagator(&self, u: &T) -> Result<Mat<Multivector<T>>, MehlerError>
    where
        T: ExpmForm,
    {
        let space = self.space();
        let e = T::expm_form(&self.l.scale(&cre(-u.clone())))?;
        Ok(e.mul(&FormMatrix::from_numeric(space, &self.a0)).as_mat().clone())
    }
}

/// Matrix exponential of form matrices for a scalar type.
pub trait ExpmForm: Real {
    fn expm_form(m: &FormMatrix<Self>) -> Result<FormMatrix<Self>, MehlerError>;
}

impl ExpmForm for f64 {
    fn expm_form(m: &FormMatrix<f64>) -> Result<FormMatrix<f64>, MehlerError> {
        match mat_series(&ScalarSeries::Exp, m) {
            Ok(e) => Ok(e),
            Err(ChernWeilError::NotScalarIdentity) => Ok(form_expm(m)),
            Err(e) => Err(e.into()),
        }
    }
}

impl ExpmForm for crate::scalar::Rational {
    fn expm_form(m: &FormMatrix<Self>) -> Result<FormMatrix<Self>, MehlerError> {
        Ok(mat_series(&ScalarSeries::Exp, m)?)
    }
}

/// Kernel value `p_u(x)`, an `m×m` matrix of forms.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelValue {
    pub value: Mat<Multivector<f64>>,
    pub u: f64,
    pub x: Vec<f64>,
}

/// `xᵀ M x` for a matrix of forms.
fn quadratic<T: Real>(m: &FormMatrix<T>, x: &[T]) -> Multivector<T> {
    let mut acc = Multivector::zero(m.space());
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            acc = acc.plus(&m.get(i, j).scale(&cre(x[i].clone() * x[j].clone())));
        }
    }
    acc
}

/// `Â(M)` and `g(M)` for `M = u𝒟`.
fn skew_functions(m: &FormMatrix<f64>) -> Result<(Multivector<f64>, FormMatrix<f64>), MehlerError> {
    let space = m.space();
    let numeric = m.scalar_part();
    let numeric_zero = numeric.data().iter().all(|c| *c == C64::new(0.0, 0.0));
    if numeric_zero {
        let ahat = chern_weil::ahat(m)?;
        let order = chern_weil::nilpotency_bound(space) + 1;
        let g = mat_series(&ScalarSeries::from_rationals(&series::half_z_coth_coeffs(2 * order)), m)?;
        return Ok((ahat, g));
    }
    if !m.nilpotent_part().is_zero() {
        return Err(MehlerError::MixedSkewPart);
    }
    let (ahat, g) = skew_functions_numeric(&numeric)?;
    Ok((Multivector::scalar(space, C64::new(ahat, 0.0)), FormMatrix::from_numeric(space, &g)))
}

/// Numeric real antisymmetric `M`: `M² = V diag(w) Vᵀ` with `w = −θ²`, so
/// `g(M) = V diag((θ/2) cot(θ/2)) Vᵀ` and `Â(M) = Π_w ((θ/2)/sin(θ/2))^{1/2}`.
pub fn skew_functions_numeric(m: &Mat<C64>) -> Result<(f64, Mat<C64>), MehlerError> {
    let n = m.rows();
    let scale = m.data().iter().map(|c| Float::abs(c.re).max(Float::abs(c.im))).fold(0.0, f64::max).max(1.0);
    if m.data().iter().any(|c| Float::abs(c.im) > 1e-14 * scale) {
        return Err(MehlerError::ComplexSkewPart);
    }
    let sq = m.mul(m);
    let flat: Vec<f64> = (0..n * n).map(|k| 0.5 * (sq.get(k / n, k % n).re + sq.get(k % n, k / n).re)).collect();
    let (w, v) = jacobi_eigen(&flat, n)?;
    let mut log_ahat = 0.0;
    let mut gdiag = Vec::with_capacity(n);
    for &wk in &w {
        let theta = Float::sqrt((-wk).max(0.0));
        if theta >= 2.0 * core::f64::consts::PI - 1e-9 {
            return Err(MehlerError::OutsideConvergence);
        }
        let z = 0.5 * theta;
        let (h, g) = if z < 1e-4 {
            let z2 = z * z;
            (1.0 + z2 / 6.0 + 7.0 * z2 * z2 / 360.0, 1.0 - z2 / 3.0 - z2 * z2 / 45.0)
        } else {
            (z / Float::sin(z), z * Float::cos(z) / Float::sin(z))
        };
        log_ahat += 0.5 * Float::ln(h);
        gdiag.push(g);
    }
    let g = Mat::from_fn(n, n, |i, j| C64::new((0..n).map(|k| v[i * n + k] * gdiag[k] * v[j * n + k]).sum(), 0.0));
    Ok((Float::exp(log_ahat), g))
}

/// Closed-form kernel `p_u(x)`.
pub fn mehler_eval(u: f64, x: &[f64], params: &MehlerParams<f64>) -> Result<KernelValue, MehlerError> {
    if !(u > 0.0) {
        return Err(MehlerError::NonPositiveTime);
    }
    if x.len() != params.n {
        return Err(MehlerError::Shape);
    }
    let (ahat, g) = skew_functions(&params.skew_part().scale(&C64::new(u, 0.0)))?;
    let expo = quadratic(&params.symmetric_part(), x)
        .scale(&C64::new(-0.125, 0.0))
        .plus(&quadratic(&g, x).scale(&C64::new(-0.25 / u, 0.0)));
    let pref = Float::powf(4.0 * core::f64::consts::PI * u, -0.5 * params.n as f64);
    let scalar = ahat.times(&chern_weil::form_exp(&expo)?).scale(&C64::new(pref, 0.0));
    let value = params.propagator(&u)?.left_mul_elem(&scalar);
    Ok(KernelValue { value, u, x: x.to_vec() })
}

/// `(H p)(x)` from a stencil of kernel values; `p` is sampled by `eval`.
fn apply_h<F>(x: &[f64], params: &MehlerParams<f64>, h: f64, eval: &mut F) -> Result<Mat<Multivector<f64>>, MehlerError>
where
    F: FnMut(&[f64]) -> Result<Mat<Multivector<f64>>, MehlerError>,
{
    let n = params.n;
    let b = &params.b;
    let p0 = eval(x)?;
    let zero = p0.zero_like();
    let mut lap = zero.clone();
    let mut grad = vec![zero.clone(); n];
    for i in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let pp = eval(&xp)?;
        let pm = eval(&xm)?;
        grad[i] = pp.sub(&pm).scale(&C64::new(0.5 / h, 0.0));
        lap = lap.add(&pp.add(&pm).sub(&p0.scale(&C64::new(2.0, 0.0))).scale(&C64::new(1.0 / (h * h), 0.0)));
    }
    // H = −Δ − ½ (Bx)·∇ − ¼ tr B − (1/16)|Bx|² + L
    let space = params.space();
    let bx: Vec<Multivector<f64>> = (0..n)
        .map(|i| (0..n).fold(Multivector::zero(space), |acc, j| acc.plus(&b.get(i, j).scale(&C64::new(x[j], 0.0)))))
        .collect();
    let mut out = lap.neg();
    for i in 0..n {
        out = out.sub(&grad[i].left_mul_elem(&bx[i].scale(&C64::new(0.5, 0.0))));
    }
    let bx2 = bx.iter().fold(Multivector::zero(space), |acc, v| acc.plus(&v.times(v)));
    let pot = b.trace().scale(&C64::new(0.25, 0.0)).plus(&bx2.scale(&C64::new(1.0 / 16.0, 0.0)));
    out = out.sub(&p0.left_mul_elem(&pot));
    out = out.add(&params.l.as_mat().mul(&p0));
    Ok(out)
}

/// `max |(∂_u + H_x) p_u(x)|` with central differences of step `h`.
pub fn heat_residual(u: f64, x: &[f64], params: &MehlerParams<f64>, h: f64) -> Result<f64, MehlerError> {
    if !(u > h && h > 0.0) {
        return Err(MehlerError::NonPositiveTime);
    }
    let pu = |t: f64| -> Result<Mat<Multivector<f64>>, MehlerError> { Ok(mehler_eval(t, x, params)?.value) };
    let du = pu(u + h)?.sub(&pu(u - h)?).scale(&C64::new(0.5 / h, 0.0));
    let mut eval = |y: &[f64]| -> Result<Mat<Multivector<f64>>, MehlerError> { Ok(mehler_eval(u, y, params)?.value) };
    let hp = apply_h(x, params, h, &mut eval)?;
    Ok(Ring::max_abs(&du.add(&hp)))
}

type MatPoly<T> = Poly<Mat<Multivector<T>>>;

/// Output of the transport recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalCoeffs<T: Real = f64> {
    /// Symmetric part `C`; `Φ_k = e^{−⅛ xᵀCx} Ψ_k`.
    pub symmetric: FormMatrix<T>,
    /// `Ψ_0 .. Ψ_{k_max}` as polynomials in `x` with `m×m` form coefficients.
    pub psi: Vec<MatPoly<T>>,
}

impl<T: Real> FormalCoeffs<T> {
    /// `Φ_k(x)`.
    pub fn phi_at(&self, k: usize, x: &[T]) -> Result<Mat<Multivector<T>>, MehlerError> {
        let gauge = chern_weil::form_exp(&quadratic(&self.symmetric, x).scale(&cratio(-1, 8)))?;
        Ok(self.psi[k].eval(x).left_mul_elem(&gauge))
    }
}

/// Largest `k_max` accepted by [`formal_coeffs`] and [`taylor_coeffs`].
pub const MAX_FORMAL_ORDER: usize = 6;

fn identity_matrix<T: Real>(space: GeneratorSpace, m: usize) -> Mat<Multivector<T>> {
    Mat::identity_like(m, &Multivector::zero(space))
}

fn lift_scalar<T: Real>(p: &Poly<Multivector<T>>, m: usize) -> MatPoly<T> {
    let id = identity_matrix::<T>(p.zero_coeff().space(), m);
    let mut out = Poly::zero(p.nvars(), &id);
    for (e, c) in p.terms() {
        out.add_term(e.clone(), id.left_mul_elem(c));
    }
    out
}

/// `(𝒟x)_i` as linear polynomials.
fn skew_times_x<T: Real>(d: &FormMatrix<T>) -> Vec<Poly<Multivector<T>>> {
    let n = d.dim();
    let zero = Multivector::zero(d.space());
    (0..n)
        .map(|i| {
            let mut p = Poly::zero(n, &zero);
            for j in 0..n {
                let mut e = vec![0u8; n];
                e[j] = 1;
                p.add_term(e, d.get(i, j).clone());
            }
            p
        })
        .collect()
}

/// `H_𝒟 Ψ = −ΔΨ − ½ (𝒟x)·∇Ψ − (1/16)|𝒟x|² Ψ + LΨ`.
fn apply_h_skew<T: Real>(psi: &MatPoly<T>, dx: &[Poly<Multivector<T>>], dx2: &MatPoly<T>, l: &Mat<Multivector<T>>) -> MatPoly<T> {
    let m = l.rows();
    let mut out = psi.laplacian().neg();
    for (i, dxi) in dx.iter().enumerate() {
        out = out.sub(&lift_scalar(dxi, m).mul(&psi.deriv(i)).scale(&cratio(1, 2)));
    }
    out = out.sub(&dx2.mul(psi).scale(&cratio(1, 16)));
    out.add(&psi.left_mul(l))
}

/// Transport recursion `(k + x·∇)Ψ_k = −H_𝒟 Ψ_{k−1}`, `Ψ_0 = a₀`.
pub fn formal_coeffs<T: Real>(params: &MehlerParams<T>, k_max: usize) -> Result<FormalCoeffs<T>, MehlerError> {
    if k_max > MAX_FORMAL_ORDER {
        return Err(MehlerError::Shape);
    }
    let space = params.space();
    let n = params.n;
    let m = params.m;
    let d = params.skew_part();
    let dx = skew_times_x(&d);
    let dx2 = lift_scalar(&dx.iter().fold(Poly::zero(n, &Multivector::zero(space)), |acc, p| acc.add(&p.mul(p))), m);
    let a0 = FormMatrix::from_numeric(space, &params.a0).as_mat().clone();
    let mut psi = vec![Poly::constant(n, a0)];
    for k in 1..=k_max {
        let rhs = apply_h_skew(&psi[k - 1], &dx, &dx2, params.l.as_mat()).neg();
        psi.push(rhs.radial_solve(k));
    }
    Ok(FormalCoeffs { symmetric: params.symmetric_part(), psi })
}

/// Product of two `u`-series truncated at `k_max`.
fn series_mul<R: Ring>(a: &[Poly<R>], b: &[Poly<R>], k_max: usize) -> Vec<Poly<R>> {
    let mut out: Vec<Poly<R>> = (0..=k_max).map(|_| Poly::zero(a[0].nvars(), a[0].zero_coeff())).collect();
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            if i + j <= k_max {
                out[i + j] = out[i + j].add(&ai.mul(bj));
            }
        }
    }
    out
}

/// `exp(s)` for a `u`-series `s` without constant term.
fn series_exp<R: Ring>(s: &[Poly<R>], k_max: usize) -> Vec<Poly<R>> {
    let nv = s[0].nvars();
    let one = Poly::constant(nv, s[0].zero_coeff().one_like());
    let zero = Poly::zero(nv, s[0].zero_coeff());
    let mut out: Vec<Poly<R>> = (0..=k_max).map(|k| if k == 0 { one.clone() } else { zero.clone() }).collect();
    let mut power = out.clone();
    for j in 1..=k_max {
        power = series_mul(&power, s, k_max);
        let inv = crational(&(Rational::from_integer(1) / series::factorial(j)));
        for k in 0..=k_max {
            out[k] = out[k].add(&power[k].scale(&inv));
        }
    }
    out
}


/// Coefficients of `u^k` in `Â(u𝒟) e^{−(1/4u) xᵀ(g(u𝒟) − 1)x} e^{−uL} a₀`,
/// obtained from the Bernoulli series directly.
pub fn taylor_coeffs<T: Real>(params: &MehlerParams<T>, k_max: usize) -> Result<Vec<MatPoly<T>>, MehlerError> {
    if k_max > MAX_FORMAL_ORDER {
        return Err(MehlerError::Shape);
    }
    let space = params.space();
    let n = params.n;
    let m = params.m;
    let d = params.skew_part();
    let zero = Multivector::zero(space);
    let pzero = Poly::zero(n, &zero);
    let mut dpow = vec![FormMatrix::identity(space, n)];
    for k in 1..=k_max + 1 {
        let next = dpow[k - 1].mul(&d);
        dpow.push(next);
    }
    // log Â(u𝒟) = ½ Σ_k c_k u^k tr 𝒟^k
    let c = series::log_half_x_over_sinh_coeffs(k_max);
    let log_ahat: Vec<Poly<Multivector<T>>> = (0..=k_max)
        .map(|k| if k == 0 { pzero.clone() } else { Poly::constant(n, dpow[k].trace().scale(&(crational::<T>(&c[k]) * cratio::<T>(1, 2)))) })
        .collect();
    // −(1/4u) (g(u𝒟) − 1) = −Σ_{k≥1} h_{2k} u^{2k−1} 𝒟^{2k} / 4
    let h = series::half_z_coth_coeffs(k_max + 1);
    let mut quad: Vec<Poly<Multivector<T>>> = vec![pzero.clone(); k_max + 1];
    for k in 1..=k_max {
        let e = k + 1;
        if e % 2 == 1 || h[e] == Rational::from_integer(0) {
            continue;
        }
        let coef = crational::<T>(&h[e]) * cratio(-1, 4);
        let dm = &dpow[e];
        let mut p = pzero.clone();
        for i in 0..n {
            for j in 0..n {
                let mut ex = vec![0u8; n];
                ex[i] += 1;
                ex[j] += 1;
                p.add_term(ex, dm.get(i, j).scale(&coef));
            }
        }
        quad[k] = p;
    }
    let scalar = series_mul(&series_exp(&log_ahat, k_max), &series_exp(&quad, k_max), k_max);
    // e^{−uL} a₀
    let a0 = FormMatrix::from_numeric(space, &params.a0).as_mat().clone();
    let l = params.l.as_mat();
    let mut prop = Vec::with_capacity(k_max + 1);
    let mut term = a0;
    for k in 0..=k_max {
        if k > 0 {
            term = l.mul(&term).scale(&cratio(-1, k as i64));
        }
        prop.push(Poly::constant(n, term.clone()));
    }
    let lifted: Vec<MatPoly<T>> = scalar.iter().map(|p| lift_scalar(p, m)).collect();
    Ok(series_mul(&lifted, &prop, k_max))
}
