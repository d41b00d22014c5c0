//! Variation formula and metric anomaly for the scaling family `e^ℓ g`.

use holotorsion_core::torus::{a_minus_one_local, anomaly_check, d_squared_check, log_torsion_derivative_fd, m0_extract};

use super::{log_space, SuiteError};
use crate::config::RunConfig;
use crate::report::Case;

const ANCHOR_VARIATION: &str = "d/dl log tau_l = -M_0";
const ANCHOR_ANOMALY: &str = "tau'/tau = exp(int td_p-tilde ch)";
const ANCHOR_DIRAC: &str = "D^2 = 2 box";

pub fn run(config: &RunConfig) -> Result<Vec<Case>, SuiteError> {
    let tol = &config.tolerances;
    let cfg = config.model.to_torus()?;
    let nu = !cfg.is_unitary();

    // image terms are below e^{−50} on this grid
    let shortest = cfg.factors.iter().map(|f| f.shortest_period_sq()).fold(f64::INFINITY, f64::min);
    let t_hi = (shortest / 100.0).min(1e-2);
    let fit = m0_extract(&cfg, &log_space(t_hi / 10.0, t_hi, 12), 2)?;
    let m0 = fit.m0();
    let local = a_minus_one_local(&cfg)?;
    let fd = log_torsion_derivative_fd(&cfg, 1e-2)?;
    let anomaly = anomaly_check(&cfg, config.scale0, config.scale1, tol.get("anomaly.lhs"))?;

    let mut cases = vec![
        Case::info("m0", m0.re, "M_0: t^0 coefficient of tr_s[Q exp(-t box)]"),
        Case::check("m0_vanishes", m0.norm(), 0.0, tol.get("variation.m0"), "flat family: a_0 = 0 by degree counting"),
        Case::info("fit_condition", fit.condition, "plumbing"),
        Case::check(
            "a_minus_one_fit_vs_local",
            (fit.coeff(-1) - local).norm() / local.norm().max(1.0),
            0.0,
            tol.get("variation.a_minus_one"),
            "a_-1 = int (i/2) theta-dot td tr exp(-R^E)",
        ),
        Case::info("fd_log_torsion_derivative", fd.re, ANCHOR_VARIATION).flag_if(nu),
        Case::check("fd_derivative_plus_m0", (fd + m0).norm(), 0.0, tol.get("variation.fd"), ANCHOR_VARIATION).flag_if(nu),
        Case::info("anomaly_scale0", anomaly.scale0, "plumbing"),
        Case::info("anomaly_scale1", anomaly.scale1, "plumbing"),
        Case::check("anomaly_lhs", anomaly.lhs.norm(), 0.0, tol.get("anomaly.lhs"), ANCHOR_ANOMALY).flag_if(nu),
        Case::check("anomaly_rhs_exact_zero", anomaly.rhs.norm(), 0.0, 0.0, ANCHOR_ANOMALY),
    ];
    if nu {
        for name in ["d_squared_dirac_vs_dolbeault", "d_squared_vs_two_box", "box_vs_eigenvalue"] {
            cases.push(Case::skipped(name, ANCHOR_DIRAC));
        }
    } else {
        let d = d_squared_check(&cfg, 20)?;
        let t = tol.get("variation.d_squared");
        cases.push(Case::check("d_squared_dirac_vs_dolbeault", d.dirac_vs_dolbeault, 0.0, t, "D = sqrt2 (dbar + dbar*)"));
        cases.push(Case::check("d_squared_vs_two_box", d.d_squared_vs_two_box, 0.0, t, ANCHOR_DIRAC));
        cases.push(Case::check("box_vs_eigenvalue", d.box_vs_eigenvalue, 0.0, t, "box on Fourier modes"));
        cases.push(Case::info("fourier_modes", d.modes as f64, "plumbing"));
    }
    Ok(cases)
}
