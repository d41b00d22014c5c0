use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use super::ParametrixError;
use crate::numeric::{jacobi_eigen, solve};
use crate::linalg::Mat;
use crate::scalar::{Ring, C64};

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;
const MAX_SHELL: i64 = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Circle,
    FlatTorus,
    ProductTorus,
}

/// `ℝⁿ/Λ` with the Euclidean metric. Column `j` of the lattice matrix is the
/// generator `γ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelGeometry {
    kind: ModelKind,
    dim: usize,
    lattice: Vec<f64>,
    inverse: Vec<f64>,
    volume: f64,
    injectivity_radius: f64,
    sigma_min: f64,
}

/// Flat unitary character `χ(Σ k_j γ_j) = exp(2πi Σ k_j α_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    alpha: Vec<f64>,
}

impl Character {
    pub fn new(alpha: Vec<f64>) -> Self {
        Character { alpha }
    }

    pub fn trivial(n: usize) -> Self {
        Character { alpha: vec![0.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn value(&self, k: &[i64]) -> C64 {
        let phase: f64 = k.iter().zip(&self.alpha).map(|(&ki, a)| ki as f64 * a).sum();
        C64::new(0.0, TWO_PI * phase).exp()
    }
}

/// Integer vectors with `max |k_i| = r`.
fn shell(n: usize, r: i64) -> Vec<Vec<i64>> {
    let side = (2 * r + 1) as usize;
    let total = side.pow(n as u32);
    let mut out = Vec::new();
    for mut idx in 0..total {
        let mut k = vec![0i64; n];
        for c in k.iter_mut() {
            *c = (idx % side) as i64 - r;
            idx /= side;
        }
        if k.iter().map(|c| c.abs()).max().unwrap_or(0) == r {
            out.push(k);
        }
    }
    out
}

impl ModelGeometry {
    /// Lattice given row-major, generators as columns.
    pub fn new(kind: ModelKind, dim: usize, lattice: Vec<f64>) -> Result<Self, ParametrixError> {
        if lattice.len() != dim * dim || dim == 0 {
            return Err(ParametrixError::Shape);
        }
        let a = Mat::from_fn(dim, dim, |i, j| C64::new(lattice[i * dim + j], 0.0));
        let det = crate::numeric::det(&a).re;
        if !(Float::abs(det) > 0.0) {
            return Err(ParametrixError::Shape);
        }
        let inv = solve(&a, &Mat::identity(dim))?;
        let inverse: Vec<f64> = inv.data().iter().map(|c| c.re).collect();
        let gram: Vec<f64> = (0..dim * dim)
            .map(|idx| (0..dim).map(|k| lattice[k * dim + idx / dim] * lattice[k * dim + idx % dim]).sum())
            .collect();
        let (ev, _) = jacobi_eigen(&gram, dim)?;
        let sigma_min = Float::sqrt(ev[0].max(0.0));
        let mut geom = ModelGeometry { kind, dim, lattice, inverse, volume: Float::abs(det), injectivity_radius: 0.0, sigma_min };
        geom.injectivity_radius = 0.5 * geom.shortest_vector();
        Ok(geom)
    }

    /// `ℝ/Lℤ`.
    pub fn circle(length: f64) -> Result<Self, ParametrixError> {
        Self::new(ModelKind::Circle, 1, vec![length])
    }

    /// `ℝ²/Λ` with generators `(a₀, a₁)` and `(b₀, b₁)`.
    pub fn flat_torus(a: [f64; 2], b: [f64; 2]) -> Result<Self, ParametrixError> {
        Self::new(ModelKind::FlatTorus, 2, vec![a[0], b[0], a[1], b[1]])
    }

    /// `ℝ²/(ℤ √λ ⊕ ℤ √λ τ)` identifying `ℂ` with `ℝ²`.
    pub fn from_modulus(tau: C64, scale: f64) -> Result<Self, ParametrixError> {
        let s = Float::sqrt(scale);
        Self::flat_torus([s, 0.0], [s * tau.re, s * tau.im])
    }

    /// Riemannian product of two flat models.
    pub fn product(a: &Self, b: &Self) -> Result<Self, ParametrixError> {
        let n = a.dim + b.dim;
        let mut l = vec![0.0; n * n];
        for i in 0..a.dim {
            for j in 0..a.dim {
                l[i * n + j] = a.lattice[i * a.dim + j];
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                l[(a.dim + i) * n + a.dim + j] = b.lattice[i * b.dim + j];
            }
        }
        Self::new(ModelKind::ProductTorus, n, l)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lattice(&self) -> &[f64] {
        &self.lattice
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn injectivity_radius(&self) -> f64 {
        self.injectivity_radius
    }

    pub fn lattice_vector(&self, k: &[i64]) -> Vec<f64> {
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|j| self.lattice[i * n + j] * k[j] as f64).sum()).collect()
    }

    fn shortest_vector(&self) -> f64 {
        let mut best = f64::INFINITY;
        let mut r = 1;
        while (r as f64) * self.sigma_min <= best && r <= MAX_SHELL {
            for k in shell(self.dim, r) {
                let len = Float::sqrt(self.lattice_vector(&k).iter().map(|c| c * c).sum::<f64>());
                best = best.min(len);
            }
            r += 1;
        }
        best
    }

    pub fn displacement(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        x.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    /// Shortest representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim;
        let c: Vec<i64> = (0..n).map(|i| Float::round((0..n).map(|j| self.inverse[i * n + j] * v[j]).sum::<f64>()) as i64).collect();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for d in shell(n, 1).into_iter().chain(core::iter::once(vec![0; n])) {
            let k: Vec<i64> = c.iter().zip(&d).map(|(a, b)| a + b).collect();
            let lam = self.lattice_vector(&k);
            let w: Vec<f64> = v.iter().zip(&lam).map(|(a, b)| a - b).collect();
            let len: f64 = w.iter().map(|x| x * x).sum();
            if best.as_ref().is_none_or(|b| len < b.0) {
                best = Some((len, w));
            }
        }
        best.map(|b| b.1).unwrap_or_else(|| v.to_vec())
    }

    /// Riemannian distance.
    pub fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        Float::sqrt(self.reduce(&self.displacement(x, y)).iter().map(|c| c * c).sum::<f64>())
    }

    /// `Σ_{k ∈ ℤⁿ} f(k, λ_k)` by max-norm shells, stopped once two
    /// consecutive shells add less than `1e−16` of the running value.
    pub fn image_sum<R: Ring>(&self, u: f64, mut f: impl FnMut(&[i64], &[f64]) -> R) -> Result<R, ParametrixError> {
        let mut total = f(&vec![0; self.dim], &vec![0.0; self.dim]);
        let mut quiet = 0;
        for r in 1..=MAX_SHELL {
            let mut part = total.zero_like();
            for k in shell(self.dim, r) {
                part = part.plus(&f(&k, &self.lattice_vector(&k)));
            }
            total = total.plus(&part);
            if part.max_abs() <= 1e-16 * total.max_abs() {
                quiet += 1;
                if quiet == 2 {
                    return Ok(total);
                }
            } else {
                quiet = 0;
            }
        }
        Err(ParametrixError::TruncationFailed { u })
    }

    /// `Σ f(|k|²)` over `k = 2π Λ^{−ᵀ}(m + α)`, `m ∈ ℤⁿ`.
    pub fn dual_sum(&self, u: f64, chi: &Character, mut f: impl FnMut(f64) -> f64) -> Result<f64, ParametrixError> {
        let n = self.dim;
        let alpha = chi.alpha();
        let k2 = |m: &[i64]| -> f64 {
            (0..n)
                .map(|i| {
                    // (Λ^{−ᵀ} w)_i = Σ_j inv[j][i] w_j
                    let c: f64 = (0..n).map(|j| self.inverse[j * n + i] * (m[j] as f64 + alpha[j])).sum();
                    (TWO_PI * c) * (TWO_PI * c)
                })
                .sum()
        };
        let mut total = f(k2(&vec![0; n]));
        let mut quiet = 0;
        for r in 1..=MAX_SHELL {
            let part: f64 = shell(n, r).iter().map(|m| f(k2(m))).sum();
            total += part;
            if Float::abs(part) <= 1e-16 * Float::abs(total) {
                quiet += 1;
                if quiet == 2 {
                    return Ok(total);
                }
            } else {
                quiet = 0;
            }
        }
        Err(ParametrixError::TruncationFailed { u })
    }
}
