//! Chern–Weil forms from matrices of commuting even forms.
//!
//! Matrix functions are evaluated about the scalar part `c·I`; the remaining
//! nilpotent part makes every series terminate.

mod curvature;
mod form_matrix;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

pub use curvature::{realify, realify_hermitian, complex_structure, CurvatureData};
pub use form_matrix::FormMatrix;

use crate::algebra::{AlgebraError, Generator, GeneratorSpace, Multivector};
use crate::linalg::Mat;
use crate::numeric;
use crate::quad;
use crate::scalar::{cratio, crational, Rational, Real, C64};
use crate::series;

#[derive(Debug, Clone, PartialEq)]
pub enum ChernWeilError {
    Algebra(AlgebraError),
    /// The degree-zero part is not a multiple of the identity.
    NotScalarIdentity,
    /// The scalar part is nonzero and the series is only known about 0.
    NonzeroScalarPart,
    /// The nilpotent part needs more series terms than supplied.
    SeriesTooShort { needed: usize, supplied: usize },
    IndexOutOfRange { p: usize, dim: usize },
    Shape,
    OddEntry,
    /// A pivot with vanishing scalar part in determinant or inverse.
    NotInvertible,
    /// Integration needs a pure frame form.
    AuxiliaryPresent,
}

impl fmt::Display for ChernWeilError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChernWeilError::Algebra(e) => write!(f, "{e}"),
            ChernWeilError::NotScalarIdentity => write!(f, "scalar part is not a multiple of the identity"),
            ChernWeilError::NonzeroScalarPart => write!(f, "series is only available about zero"),
            ChernWeilError::SeriesTooShort { needed, supplied } => {
                write!(f, "series needs {needed} coefficients, {supplied} supplied")
            }
            ChernWeilError::IndexOutOfRange { p, dim } => write!(f, "index {p} out of range 0..={dim}"),
            ChernWeilError::Shape => write!(f, "matrix shape mismatch"),
            ChernWeilError::OddEntry => write!(f, "form matrix entries must be even"),
            ChernWeilError::NotInvertible => write!(f, "matrix is not invertible"),
            ChernWeilError::AuxiliaryPresent => write!(f, "form carries auxiliary parameters"),
        }
    }
}

impl core::error::Error for ChernWeilError {}

impl From<AlgebraError> for ChernWeilError {
    fn from(e: AlgebraError) -> Self {
        ChernWeilError::Algebra(e)
    }
}

/// Scalar function given by its Taylor data.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarSeries<T: Real = f64> {
    Exp,
    /// Coefficients about 0; usable only when the scalar part vanishes.
    AtZero(Vec<Complex<T>>),
}

impl<T: Real> ScalarSeries<T> {
    pub fn from_rationals(c: &[Rational]) -> Self {
        ScalarSeries::AtZero(c.iter().map(crational).collect())
    }

    /// `f^{(k)}(c)/k!` for `k = 0..=order`.
    pub fn taylor_at(&self, c: &Complex<T>, order: usize) -> Result<Vec<Complex<T>>, ChernWeilError> {
        match self {
            ScalarSeries::Exp => {
                let ec = T::exp_complex(c).ok_or(ChernWeilError::NonzeroScalarPart)?;
                Ok(series::exp_coeffs(order).iter().map(|r| ec.clone() * crational(r)).collect())
            }
            ScalarSeries::AtZero(coeffs) => {
                if !c.is_zero() {
                    return Err(ChernWeilError::NonzeroScalarPart);
                }
                Ok(coeffs.clone())
            }
        }
    }
}

/// Largest `k` with `N^k ≠ 0` possible for a positive-degree even `N`.
pub fn nilpotency_bound(space: GeneratorSpace) -> usize {
    space.n_generators() / 2
}

/// `f(M)` for `M = c·I + N`, evaluated as `Σ_k f^{(k)}(c)/k! · N^k`.
pub fn mat_series<T: Real>(f: &ScalarSeries<T>, m: &FormMatrix<T>) -> Result<FormMatrix<T>, ChernWeilError> {
    let c = m.scalar_multiple_of_identity().ok_or(ChernWeilError::NotScalarIdentity)?;
    let order = nilpotency_bound(m.space());
    let coeffs = f.taylor_at(&c, order)?;
    let nil = m.nilpotent_part();
    let space = m.space();
    let dim = m.dim();
    let mut out = FormMatrix::zeros(space, dim);
    let mut power = FormMatrix::identity(space, dim);
    let mut k = 0;
    while !power.is_zero() {
        let a = coeffs.get(k).ok_or(ChernWeilError::SeriesTooShort { needed: k + 1, supplied: coeffs.len() })?;
        out = out.add(&power.scale(a));
        power = power.mul(&nil);
        k += 1;
    }
    Ok(out)
}

/// `f(x)` for a single even form.
pub fn form_series<T: Real>(f: &ScalarSeries<T>, x: &Multivector<T>) -> Result<Multivector<T>, ChernWeilError> {
    let m = FormMatrix::from_fn(x.space(), 1, |_, _| x.clone());
    Ok(mat_series(f, &m)?.get(0, 0).clone())
}

pub fn form_exp<T: Real>(x: &Multivector<T>) -> Result<Multivector<T>, ChernWeilError> {
    form_series(&ScalarSeries::Exp, x)
}

fn series_order(space: GeneratorSpace) -> usize {
    nilpotency_bound(space) + 1
}

/// `td(M) = det(M/(e^M − 1)) = exp(tr log(M/(e^M − 1)))`.
pub fn todd<T: Real>(m: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    let f = ScalarSeries::from_rationals(&series::log_x_over_expm1_coeffs(series_order(m.space())));
    form_exp(&mat_series(&f, m)?.trace())
}

/// `Â(M) = det^{1/2}((M/2)/sinh(M/2)) = exp(½ tr log((M/2)/sinh(M/2)))`.
pub fn ahat<T: Real>(m: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    let f = ScalarSeries::from_rationals(&series::log_half_x_over_sinh_coeffs(series_order(m.space())));
    form_exp(&mat_series(&f, m)?.trace().scale(&cratio(1, 2)))
}

/// `σ_0..σ_dim` of `M` via Newton's identities `k σ_k = Σ (−1)^{i−1} σ_{k−i} tr(M^i)`.
pub fn sigma_all<T: Real>(m: &FormMatrix<T>) -> Vec<Multivector<T>> {
    let space = m.space();
    let n = m.dim();
    let mut power_sums = Vec::with_capacity(n + 1);
    power_sums.push(Multivector::scalar(space, cratio(n as i64, 1)));
    let mut pw = FormMatrix::identity(space, n);
    for _ in 1..=n {
        pw = pw.mul(m);
        power_sums.push(pw.trace());
    }
    let mut sig = vec![Multivector::one(space)];
    for k in 1..=n {
        let mut acc = Multivector::zero(space);
        for i in 1..=k {
            let term = sig[k - i].wedge(&power_sums[i]).expect("same space");
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        sig.push(acc.scale(&cratio(1, k as i64)));
    }
    sig
}

/// Coefficient of `t^p` in `det(I + tM)`.
pub fn sigma_p<T: Real>(p: usize, m: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    if p > m.dim() {
        return Err(ChernWeilError::IndexOutOfRange { p, dim: m.dim() });
    }
    Ok(sigma_all(m).swap_remove(p))
}

/// `td_p(M) = td(M) σ_p(exp M)`.
pub fn td_p<T: Real>(p: usize, m: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    if p > m.dim() {
        return Err(ChernWeilError::IndexOutOfRange { p, dim: m.dim() });
    }
    let e = mat_series(&ScalarSeries::Exp, m)?;
    Ok(todd(m)?.wedge(&sigma_p(p, &e)?)?)
}

/// `tr exp(A)`.
pub fn trace_exp<T: Real>(a: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    Ok(mat_series(&ScalarSeries::Exp, a)?.trace())
}

/// `ch(E, ∇^E) = tr exp(−R^E / 2πi)`.
pub fn chern_char(r_e: &FormMatrix<f64>) -> Result<Multivector<f64>, ChernWeilError> {
    let c = -C64::new(0.0, 2.0 * PI).inv();
    trace_exp(&r_e.scale(&c))
}

/// The generator space extended by `da, dā`, and `b = da dā` in it.
fn with_dual<T: Real>(space: GeneratorSpace) -> Result<(GeneratorSpace, Multivector<T>), ChernWeilError> {
    if space.has_da_dabar() {
        return Err(ChernWeilError::Algebra(AlgebraError::SpaceMismatch));
    }
    let ext = GeneratorSpace::new(space.n_frame(), space.n_theta(), true, space.q_cap() + 2)?;
    let b = Multivector::monomial(ext, &[Generator::Da, Generator::DaBar], Complex::one())?;
    Ok((ext, b))
}

/// Restrict an element of the extended space back to the original one.
fn restrict<T: Real>(x: &Multivector<T>, space: GeneratorSpace) -> Result<Multivector<T>, ChernWeilError> {
    Ok(x.embed(space)?)
}

/// `∂/∂b|₀ td_p(R + bU)`, exact: `b = da dā` is an even element with
/// `b² = 0`, and the derivative is the `da dā` coefficient.
pub fn td_p_b_derivative<T: Real>(p: usize, r: &FormMatrix<T>, u: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    if r.dim() != u.dim() || r.space() != u.space() {
        return Err(ChernWeilError::Shape);
    }
    let (ext, b) = with_dual::<T>(r.space())?;
    let m = r.embed(ext)?.add(&u.embed(ext)?.times_form(&b));
    let full = td_p(p, &m)?;
    restrict(&full.extract_da_dabar()?, r.space())
}

/// Multivector inverse for an element with invertible scalar part.
pub fn form_inverse<T: Real>(x: &Multivector<T>) -> Result<Multivector<T>, ChernWeilError> {
    let c = x.scalar_part();
    if c.is_zero() {
        return Err(ChernWeilError::NotInvertible);
    }
    let cinv = Complex::<T>::one() / c;
    let n = x.filter(|k| k != 0).scale(&cinv);
    // (c(1+n))^{-1} = c^{-1} Σ (−n)^k
    let mut out = Multivector::zero(x.space());
    let mut pw = Multivector::one(x.space());
    while !pw.is_zero() {
        out = out + pw.clone();
        pw = pw.wedge(&n)?.scale(&cratio(-1, 1));
    }
    Ok(out.scale(&cinv))
}

/// Determinant over the commutative ring of even forms, by elimination with
/// pivots chosen on the scalar part.
pub fn form_det<T: Real>(m: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    let n = m.dim();
    let space = m.space();
    let mut a: Vec<Vec<Multivector<T>>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut det = Multivector::one(space);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| {
                let x = crate::scalar::Ring::max_abs(&a[i][k].scalar_part());
                let y = crate::scalar::Ring::max_abs(&a[j][k].scalar_part());
                x.partial_cmp(&y).unwrap_or(core::cmp::Ordering::Equal)
            })
            .expect("nonempty range");
        if a[piv][k].scalar_part().is_zero() {
            // Pure nilpotent column: the determinant is a sum of products that
            // each contain a nilpotent factor; fall back to Laplace expansion.
            return laplace_det(m);
        }
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        let inv = form_inverse(&a[k][k])?;
        det = det.wedge(&a[k][k])?;
        for i in k + 1..n {
            let f = a[i][k].wedge(&inv)?;
            for j in k..n {
                let v = a[i][j].clone() - f.wedge(&a[k][j])?;
                a[i][j] = v;
            }
        }
    }
    Ok(det)
}

/// Cofactor expansion along the first row.
pub fn laplace_det<T: Real>(m: &FormMatrix<T>) -> Result<Multivector<T>, ChernWeilError> {
    let n = m.dim();
    let space = m.space();
    if n == 0 {
        return Ok(Multivector::one(space));
    }
    if n == 1 {
        return Ok(m.get(0, 0).clone());
    }
    let mut acc = Multivector::zero(space);
    for j in 0..n {
        let minor = FormMatrix::from_fn(space, n - 1, |r, c| m.get(r + 1, if c < j { c } else { c + 1 }).clone());
        let term = m.get(0, j).wedge(&laplace_det(&minor)?)?;
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// `exp(M)` for float form matrices with arbitrary numeric part, by scaling
/// and squaring a Taylor core in the ring of forms.
pub fn form_expm(m: &FormMatrix<f64>) -> FormMatrix<f64> {
    let scal = m.scalar_part();
    let norm = (0..m.dim()).map(|i| (0..m.dim()).map(|j| crate::scalar::c64_abs(*scal.get(i, j))).sum::<f64>()).fold(0.0, f64::max);
    let mut s = 0;
    while norm / f64::from(1u32 << s.min(30)) > 0.5 && s < 30 {
        s += 1;
    }
    let scaled = m.scale(&C64::new(1.0 / f64::from(1u32 << s), 0.0));
    let space = m.space();
    let mut out = FormMatrix::identity(space, m.dim());
    let mut term = FormMatrix::identity(space, m.dim());
    for k in 1..=(22 + nilpotency_bound(space)) {
        term = term.mul(&scaled).scale(&C64::new(1.0 / k as f64, 0.0));
        if term.max_abs() < 1e-300 {
            break;
        }
        out = out.add(&term);
    }
    for _ in 0..s {
        out = out.mul(&out);
    }
    out
}

/// `td(M) = det(M) / det(e^M − I)` for float matrices whose numeric part is
/// invertible; independent of the series route.
pub fn todd_general(m: &FormMatrix<f64>) -> Result<Multivector<f64>, ChernWeilError> {
    let e = form_expm(m).sub(&FormMatrix::identity(m.space(), m.dim()));
    let num = form_det(m)?;
    let den = form_det(&e)?;
    Ok(num.wedge(&form_inverse(&den)?)?)
}

/// `td_p` through [`todd_general`] and [`form_expm`].
pub fn td_p_general(p: usize, m: &FormMatrix<f64>) -> Result<Multivector<f64>, ChernWeilError> {
    if p > m.dim() {
        return Err(ChernWeilError::IndexOutOfRange { p, dim: m.dim() });
    }
    Ok(todd_general(m)?.wedge(&sigma_p(p, &form_expm(m))?)?)
}

/// [`td_p_b_derivative`] for numeric parts that are not multiples of `I`.
pub fn td_p_b_derivative_general(p: usize, r: &FormMatrix<f64>, u: &FormMatrix<f64>) -> Result<Multivector<f64>, ChernWeilError> {
    if r.dim() != u.dim() || r.space() != u.space() {
        return Err(ChernWeilError::Shape);
    }
    let (ext, b) = with_dual::<f64>(r.space())?;
    let m = r.embed(ext)?.add(&u.embed(ext)?.times_form(&b));
    restrict(&td_p_general(p, &m)?.extract_da_dabar()?, r.space())
}

/// Both sides of `tr_{Λ^p}[exp(Σ ⟨Aω_i, ω̄_j⟩ ω^i∧i_{ω_j})] = σ_p(exp A)`.
///
/// The left side exponentiates the induced derivation on `Λ(ℂⁿ)` built from
/// creation and annihilation operators and traces over degree `p`; the right
/// side applies Newton's identities to `exp A`.
pub fn sigma_p_trace_identity_check(p: usize, a: &Mat<C64>) -> Result<(C64, C64), ChernWeilError> {
    let n = a.rows();
    if !a.is_square() || n > 8 {
        return Err(ChernWeilError::Shape);
    }
    if p > n {
        return Err(ChernWeilError::IndexOutOfRange { p, dim: n });
    }
    let dim = 1usize << n;
    let sign = |m: usize, j: usize| if (m & ((1 << j) - 1)).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
    let mut k = Mat::<C64>::zeros(dim, dim);
    for m in 0..dim {
        for j in 0..n {
            if m & (1 << j) == 0 {
                continue;
            }
            let s1 = sign(m, j);
            let m1 = m & !(1 << j);
            for i in 0..n {
                if m1 & (1 << i) != 0 {
                    continue;
                }
                let s2 = sign(m1, i);
                let target = m1 | (1 << i);
                // coefficient ⟨Aω_i, ω̄_j⟩ = A_ji
                let v = *k.get(target, m) + *a.get(j, i) * (s1 * s2);
                k.set(target, m, v);
            }
        }
    }
    let ek = numeric::expm(&k);
    let lhs = (0..dim).filter(|m| m.count_ones() as usize == p).fold(C64::zero(), |acc, m| acc + *ek.get(m, m));
    let space = GeneratorSpace::frame(0)?;
    let ea = FormMatrix::from_numeric(space, &numeric::expm(a));
    let rhs = sigma_p(p, &ea)?.scalar_part();
    Ok((lhs, rhs))
}

/// Flat model descriptor for [`integrate_top`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelVolume {
    pub real_dim: usize,
    pub volume: f64,
}

/// `∫_M form` for a form with constant coefficients in an orthonormal frame.
pub fn integrate_top(form: &Multivector<f64>, model: &ModelVolume) -> Result<C64, ChernWeilError> {
    let space = form.space();
    if space.n_frame() != model.real_dim {
        return Err(ChernWeilError::Shape);
    }
    if form.has_aux() {
        return Err(ChernWeilError::AuxiliaryPresent);
    }
    Ok(form.coeff(space.top_frame()) * model.volume)
}

/// Composite Gauss–Legendre settings for the `ℓ`-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub l0: f64,
    pub l1: f64,
    pub tol: f64,
    pub nodes: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec { l0: 0.0, l1: 1.0, tol: 1e-10, nodes: 8 }
    }
}

/// Integral of a form-valued function, panel count doubling until two
/// successive results agree to `tol` in every coefficient.
pub fn integrate_forms<F>(mut f: F, spec: &QuadSpec) -> Result<(Multivector<f64>, f64), ChernWeilError>
where
    F: FnMut(f64) -> Result<Multivector<f64>, ChernWeilError>,
{
    let (x, w) = quad::gauss_legendre(spec.nodes);
    let mut eval = |panels: usize| -> Result<Multivector<f64>, ChernWeilError> {
        let h = (spec.l1 - spec.l0) / panels as f64;
        let mut total: Option<Multivector<f64>> = None;
        for p in 0..panels {
            let mid = spec.l0 + h * (p as f64 + 0.5);
            for (xi, wi) in x.iter().zip(&w) {
                let v = f(mid + 0.5 * h * xi)?.scale(&C64::new(0.5 * h * wi, 0.0));
                total = Some(match total {
                    Some(t) => t + v,
                    None => v,
                });
            }
        }
        Ok(total.expect("at least one node"))
    };
    let mut panels = 1;
    let mut prev = eval(panels)?;
    loop {
        panels *= 2;
        let cur = eval(panels)?;
        let err = (cur.clone() - prev).max_abs_coeff();
        if err < spec.tol || panels >= 1 << 12 {
            return Ok((cur, err));
        }
        prev = cur;
    }
}

/// `ϖ = (2πi)^{−n} ∫_{l0}^{l1} ∂/∂b|₀ td_p(R_ℓ + bU_ℓ) dℓ · tr exp(−R^E)`.
pub fn transgression_form<F>(family: F, p: usize, spec: &QuadSpec) -> Result<Multivector<f64>, ChernWeilError>
where
    F: Fn(f64) -> CurvatureData,
{
    let base = family(spec.l0);
    let n = base.r_plus.dim();
    let (integral, _err) = integrate_forms(|l| {
        let c = family(l);
        td_p_b_derivative(p, &c.r_plus, &c.u_plus)
    }, spec)?;
    let norm = C64::new(0.0, 2.0 * PI).powi(-(n as i32));
    let tr = trace_exp(&base.r_e.neg())?;
    Ok(integral.wedge(&tr)?.scale(&norm))
}

#[cfg(test)]
mod tests;
