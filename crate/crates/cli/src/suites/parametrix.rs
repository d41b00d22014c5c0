//! Heat-kernel parametrix: Poisson summation of heat traces, and the
//! empirical error order against the exact flat kernel.

use std::f64::consts::PI;

use holotorsion_core::algebra::{Generator, GeneratorSpace, Multivector};
use holotorsion_core::linalg::Mat;
use holotorsion_core::parametrix::{error_order_fit, heat_trace_images, heat_trace_spectral, plateau_grid, Character, CutoffSpec, ErrorFit, FiberMat, ModelGeometry, ParamConnection};
use holotorsion_core::{Ring, C64};

use super::{log_space, SuiteError};
use crate::config::RunConfig;
use crate::report::Case;

type Mv = Multivector<f64>;

fn square_torus() -> Result<ModelGeometry, SuiteError> {
    Ok(ModelGeometry::flat_torus([2.0 * PI, 0.0], [0.0, 2.0 * PI])?)
}

/// Largest relative gap between image and eigenvalue heat traces for
/// `u ∈ {0.1, 0.2, …, 2}`.
fn poisson() -> Result<f64, SuiteError> {
    let cases = [
        (square_torus()?, Character::trivial(2)),
        (ModelGeometry::from_modulus(C64::new(0.37, 1.3), 4.0)?, Character::new(vec![0.25, 0.6])),
        (ModelGeometry::circle(3.0)?, Character::new(vec![0.4])),
        (ModelGeometry::product(&ModelGeometry::circle(2.5)?, &ModelGeometry::circle(3.5)?)?, Character::new(vec![0.1, 0.0])),
    ];
    let mut worst: f64 = 0.0;
    for (g, chi) in &cases {
        for k in 1..=20 {
            let u = 0.1 * k as f64;
            let a = heat_trace_images(g, chi, u)?;
            let b = heat_trace_spectral(g, chi, u)?;
            worst = worst.max((a - C64::new(b, 0.0)).norm() / b.abs());
        }
    }
    Ok(worst)
}

fn numeric_fiber(space: GeneratorSpace, rows: &[&[f64]]) -> FiberMat<f64> {
    let m = rows.len();
    Mat::from_fn(m, m, |i, j| Mv::scalar(space, C64::new(rows[i][j], 0.0)))
}

/// Fitted slopes of `log ‖p_u − k^N_u‖` against `log u` for `N = 2, 3` on
/// the square torus with a nonzero potential.
fn error_orders() -> Result<Vec<(usize, Option<f64>)>, SuiteError> {
    let g = square_torus()?;
    let s = GeneratorSpace::new(0, 2, false, 2)?;
    let th = Mv::generator(s, Generator::Theta(0))?.times(&Mv::generator(s, Generator::Theta(1))?);
    let rho = numeric_fiber(s, &[&[0.8, 0.3], &[-0.2, 0.5]]);
    let id = numeric_fiber(s, &[&[1.0, 0.0], &[0.0, 1.0]]);
    let w = vec![id.left_mul_elem(&th).scale(&C64::new(0.2, 0.0)), Mat::filled(2, 2, Mv::zero(s))];
    let conn = ParamConnection::constant(s, w, rho, 1.0)?;
    let cut = CutoffSpec::new(3.0, &g)?;
    let y = [0.0, 0.0];
    let pts = plateau_grid(&y, &cut, 2);
    let svals = log_space(0.002, 0.02, 6);
    let mut out = Vec::new();
    for order in [2, 3] {
        let fit = error_order_fit(&conn, &g, cut, order, &svals, 1.0, &y, &pts)?;
        out.push((order, match fit {
            ErrorFit::Slope { slope, .. } => Some(slope),
            ErrorFit::SuperPolynomial { .. } => None,
        }));
    }
    Ok(out)
}

pub fn run(config: &RunConfig) -> Result<Vec<Case>, SuiteError> {
    let tol = &config.tolerances;
    let margin = tol.get("parametrix.order_margin");
    let n = 2.0;
    let mut cases = vec![Case::check("poisson_heat_trace_identity", poisson()?, 0.0, tol.get("parametrix.poisson"), "sum over images = sum over spectrum")];
    for (order, slope) in error_orders()? {
        let name = format!("error_order_n{order}");
        let bound = order as f64 - n / 2.0 + margin;
        // a super-polynomial error would also satisfy the bound, but the
        // potential is nonzero so a finite slope is expected
        cases.push(Case::at_least(&name, slope.unwrap_or(f64::NAN), bound, "|p_u - k^N_u| <= C u^{N - n/2}"));
    }
    Ok(cases)
}
