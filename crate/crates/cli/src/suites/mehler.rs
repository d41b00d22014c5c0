//! Mehler kernel: closed form against the transport recursion, and the
//! convergence order of the heat-equation residual.

use holotorsion_core::algebra::{GeneratorSpace, Multivector};
use holotorsion_core::chern_weil::FormMatrix;
use holotorsion_core::linalg::Mat;
use holotorsion_core::mehler::{formal_coeffs, heat_residual, mehler_eval, taylor_coeffs, MehlerParams};
use holotorsion_core::scalar::cratio;
use holotorsion_core::{Rational, C64};

use super::SuiteError;
use crate::config::RunConfig;
use crate::report::Case;

const K_MAX: usize = 4;

fn numeric(space: GeneratorSpace, rows: &[&[f64]]) -> FormMatrix<f64> {
    let n = rows.len();
    FormMatrix::from_numeric(space, &Mat::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
}

/// Largest gap between recursion and Taylor coefficients, `k ≤ 4`.
fn routes_numeric() -> Result<f64, SuiteError> {
    let s = GeneratorSpace::frame(0)?;
    let b = numeric(s, &[&[0.1, 0.8, -0.3], &[-0.5, 0.0, 0.6], &[0.2, -0.4, -0.2]]);
    let l = numeric(s, &[&[0.3, -0.2], &[0.4, 0.1]]);
    let a0 = Mat::from_fn(2, 2, |i, j| C64::new(1.0 + (i * 2 + j) as f64 * 0.25, 0.0));
    let p = MehlerParams::new(b, l, a0)?;
    let rec = formal_coeffs(&p, K_MAX)?;
    let tay = taylor_coeffs(&p, K_MAX)?;
    Ok((0..=K_MAX).map(|k| rec.psi[k].sub(&tay[k]).max_abs()).fold(0.0, f64::max))
}

/// Orders `k ≤ 4` that differ between the routes, exact rational input with
/// nilpotent and numeric skew parts.
fn routes_exact() -> Result<usize, SuiteError> {
    type Rm = Multivector<Rational>;
    let s = GeneratorSpace::with_da_dabar(4)?;
    let r = |a: i64, b: i64| cratio::<Rational>(a, b);
    let e = |i| Rm::e(s, i);
    let w1 = e(0) * e(1);
    let w2 = e(2) * e(3).scale(&r(2, 3)) + e(0) * e(2);
    let b = FormMatrix::from_fn(s, 2, |i, j| match (i, j) {
        (0, 1) => w1.clone() + w2.clone(),
        (1, 0) => -w1.clone(),
        (0, 0) => w2.scale(&r(1, 2)),
        _ => Rm::zero(s),
    });
    let l = FormMatrix::from_fn(s, 1, |_, _| Rm::scalar(s, r(1, 5)) + w1.scale(&r(3, 1)));
    let nilpotent = MehlerParams::new(b, l, Mat::identity(1))?;
    let bn = FormMatrix::from_fn(s, 2, |i, j| Rm::scalar(s, r([[1, 3], [-2, 0]][i][j], 4)));
    let numeric = MehlerParams::new(bn, FormMatrix::zeros(s, 1), Mat::identity(1))?;
    let mut bad = 0;
    for p in [nilpotent, numeric] {
        let rec = formal_coeffs(&p, K_MAX)?;
        let tay = taylor_coeffs(&p, K_MAX)?;
        bad += rec.psi.iter().zip(&tay).filter(|(a, b)| a != b).count();
    }
    Ok(bad)
}

/// Residual ratio under halving of the finite-difference step.
fn residual_ratio() -> Result<f64, SuiteError> {
    let s = GeneratorSpace::frame(0)?;
    let b = numeric(s, &[&[0.3, 1.1], &[-0.4, -0.2]]);
    let l = numeric(s, &[&[0.5, 0.2], &[0.1, 0.3]]);
    let p = MehlerParams::new(b, l, Mat::identity(2))?;
    let x = [0.6, -0.4];
    Ok(heat_residual(1.0, &x, &p, 2e-2)? / heat_residual(1.0, &x, &p, 1e-2)?)
}

/// `log₂` of the error ratio of the order-4 formal series against the
/// closed form when `u` halves; the series is exact through `u⁴`.
fn series_order() -> Result<f64, SuiteError> {
    let s = GeneratorSpace::frame(0)?;
    let b = numeric(s, &[&[0.2, 0.7], &[-0.9, 0.1]]);
    let p = MehlerParams::new(b, numeric(s, &[&[0.3]]), Mat::identity(1))?;
    let f = formal_coeffs(&p, K_MAX)?;
    let x = [0.3, -0.5];
    let gaussian = |u: f64| (4.0 * std::f64::consts::PI * u).recip() * (-(x[0] * x[0] + x[1] * x[1]) / (4.0 * u)).exp();
    let err = |u: f64| -> Result<f64, SuiteError> {
        let exact = mehler_eval(u, &x, &p)?.value.get(0, 0).scalar_part();
        let mut series = C64::new(0.0, 0.0);
        for k in 0..=K_MAX {
            series += f.phi_at(k, &x)?.get(0, 0).scalar_part() * u.powi(k as i32);
        }
        Ok((exact - series * gaussian(u)).norm() / gaussian(u))
    };
    Ok((err(0.1)? / err(0.05)?).log2())
}

pub fn run(config: &RunConfig) -> Result<Vec<Case>, SuiteError> {
    let tol = &config.tolerances;
    Ok(vec![
        Case::check("closed_form_vs_recursion", routes_numeric()?, 0.0, tol.get("mehler.routes"), "unique formal solution Phi_k, k <= 4"),
        Case::check("closed_form_vs_recursion_exact_mismatches", routes_exact()? as f64, 0.0, 0.0, "unique formal solution Phi_k, k <= 4"),
        Case::check("residual_ratio_under_halving", residual_ratio()?, 4.0, tol.get("mehler.residual_ratio"), "(d_u + H) p_u = 0, second-order residual"),
        Case::at_least("formal_series_error_order", series_order()?, 4.5, "p_u = q_u sum u^k Phi_k + O(u^5)"),
    ])
}
