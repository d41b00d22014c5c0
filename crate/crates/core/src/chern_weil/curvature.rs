use alloc::vec::Vec;

use num_complex::Complex;
use num_traits::Zero;

use super::{ChernWeilError, FormMatrix};
use crate::algebra::{GeneratorSpace, Multivector};
use crate::linalg::Mat;
use crate::scalar::{cratio, imag_unit, Real};

/// Curvature and metric-variation data at a point of a Kähler model.
///
/// Real frame `e_1..e_{2n}` with `J e_{2j-1} = e_{2j}`; the unitary frame is
/// `ω_j = (e_{2j-1} − i e_{2j})/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData<T: Real = f64> {
    /// `R⁺`, `n×n`, 2-form entries.
    pub r_plus: FormMatrix<T>,
    /// `R^E`, `rank(E)×rank(E)`, 2-form entries.
    pub r_e: FormMatrix<T>,
    /// `U⁺`, `n×n`, 0-form entries.
    pub u_plus: FormMatrix<T>,
    /// `Θ̇(e_i, e_j)`, antisymmetric `2n×2n`.
    pub theta_dot: Mat<Complex<T>>,
    /// `(∇_{e_a} Θ̇)(e_i, e_j)` as `theta_dot_grad[a]`; zero on flat models.
    pub theta_dot_grad: Vec<Mat<Complex<T>>>,
}

/// `J` in the real frame.
pub fn complex_structure<T: Real>(n: usize) -> Mat<Complex<T>> {
    let mut j = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        j.set(2 * k + 1, 2 * k, cratio(1, 1));
        j.set(2 * k, 2 * k + 1, cratio(-1, 1));
    }
    j
}

/// `√2·P` where the columns of `P` are `ω_j, ω̄_j` in the real frame.
fn unitary_frame<T: Real>(n: usize) -> Mat<Complex<T>> {
    let i = imag_unit::<T>();
    let mut p = Mat::zeros(2 * n, 2 * n);
    for k in 0..n {
        p.set(2 * k, k, cratio(1, 1));
        p.set(2 * k + 1, k, -i.clone());
        p.set(2 * k, n + k, cratio(1, 1));
        p.set(2 * k + 1, n + k, i.clone());
    }
    p
}

/// Real endomorphism acting by `a` on `T^(1,0)` and by `abar` on `T^(0,1)`,
/// written in the real frame: `P diag(a, abar) P⁻¹`.
fn realify_with<T: Real>(a: &FormMatrix<T>, abar: &FormMatrix<T>) -> FormMatrix<T> {
    let n = a.dim();
    let space = a.space();
    let p = unitary_frame::<T>(n);
    // (√2 P)⁻¹ = ½ (√2 P)^†
    let pinv = p.conj_transpose().scale(&cratio(1, 2));
    let block = a.direct_sum(abar);
    let lift = |m: &Mat<Complex<T>>| FormMatrix::from_fn(space, 2 * n, |i, j| Multivector::scalar(space, m.get(i, j).clone()));
    lift(&p).mul(&block).mul(&lift(&pinv))
}

/// Realification of a skew-Hermitian (curvature-type) matrix, where the
/// `T^(0,1)` block is `−aᵀ`.
pub fn realify<T: Real>(a: &FormMatrix<T>) -> FormMatrix<T> {
    realify_with(a, &a.transpose().neg())
}

/// Realification of a Hermitian matrix, where the `T^(0,1)` block is `aᵀ`.
pub fn realify_hermitian<T: Real>(a: &FormMatrix<T>) -> FormMatrix<T> {
    realify_with(a, &a.transpose())
}

impl<T: Real> CurvatureData<T> {
    /// Builds `Θ̇(∂_i, ∂_j) = ⟨U J ∂_i, ∂_j⟩` from a numeric `U⁺`.
    pub fn new(r_plus: FormMatrix<T>, r_e: FormMatrix<T>, u_plus: FormMatrix<T>) -> Result<Self, ChernWeilError> {
        let n = r_plus.dim();
        if u_plus.dim() != n || r_plus.space() != u_plus.space() || r_e.space() != r_plus.space() {
            return Err(ChernWeilError::Shape);
        }
        let space = r_plus.space();
        if space.n_frame() != 2 * n {
            return Err(ChernWeilError::Shape);
        }
        let u = realify_hermitian(&u_plus).scalar_part();
        let uj = u.mul(&complex_structure(n));
        let theta_dot = uj.transpose();
        let zero = Mat::zeros(2 * n, 2 * n);
        Ok(CurvatureData { r_plus, r_e, u_plus, theta_dot, theta_dot_grad: alloc::vec![zero; 2 * n] })
    }

    /// Flat metric with `g_ℓ = e^ℓ g`: `R⁺ = 0`, `U⁺ = I`, `Θ̇ = Θ`.
    pub fn flat_scaling(space: GeneratorSpace, rank_e: usize) -> Result<Self, ChernWeilError> {
        let n = space.complex_dim();
        Self::new(FormMatrix::zeros(space, n), FormMatrix::zeros(space, rank_e), FormMatrix::identity(space, n))
    }

    pub fn complex_dim(&self) -> usize {
        self.r_plus.dim()
    }

    /// `Σ_i Θ̇(e_i, J e_i)`.
    pub fn theta_dot_trace_j(&self) -> Complex<T> {
        let n = self.complex_dim();
        let j = complex_structure::<T>(n);
        let mut acc = Complex::zero();
        for i in 0..2 * n {
            for k in 0..2 * n {
                // J e_i = Σ_k J_ki e_k
                acc = acc + self.theta_dot.get(i, k).clone() * j.get(k, i).clone();
            }
        }
        acc
    }

    pub fn is_theta_dot_antisymmetric(&self) -> bool {
        self.theta_dot.add(&self.theta_dot.transpose()).is_zero()
    }
}
