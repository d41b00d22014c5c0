//! Zeta-regularized torsion of the configured torus: values, independence
//! of the spectral cut, and agreement with the Kronecker limit formula.

use holotorsion_core::torus::{epstein_torsion_log, zeta_torsion, TorusConfig};

use super::SuiteError;
use crate::config::RunConfig;
use crate::report::Case;

const ANCHOR_CUT: &str = "zeta_a'(0) + log small_factor independent of a";
const ANCHOR_VALUE: &str = "log torsion = zeta_a'(0) + log small_factor";

/// Midpoints of the first `count` gaps between distinct eigenvalue levels.
pub fn gap_cuts(cfg: &TorusConfig, count: usize) -> Result<Vec<f64>, SuiteError> {
    let mut lmax = 4.0 * cfg.lowest_eigenvalue().re + 1.0;
    loop {
        let levels: Vec<f64> = cfg.spectrum(0, lmax)?.eigenvalues.iter().map(|e| e.0.re).collect();
        let mut distinct: Vec<f64> = Vec::new();
        for l in levels {
            if distinct.last().is_none_or(|&d| l - d > 1e-6 * l) {
                distinct.push(l);
            }
        }
        if distinct.len() > count {
            return Ok(distinct.windows(2).take(count).map(|w| 0.5 * (w[0] + w[1])).collect());
        }
        lmax *= 2.0;
    }
}

pub fn default_cut(cfg: &TorusConfig) -> f64 {
    0.5 * cfg.lowest_eigenvalue().re
}

pub fn run(config: &RunConfig) -> Result<Vec<Case>, SuiteError> {
    let tol = &config.tolerances;
    let cfg = config.model.to_torus()?;
    let nu = !cfg.is_unitary();
    let cut = config.model.cut.unwrap_or_else(|| default_cut(&cfg));
    let z = zeta_torsion(&cfg, cut)?;
    let mut cases = vec![
        Case::info("cut", cut, "plumbing"),
        Case::info("small_count", z.small_count as f64, "plumbing"),
        Case::info("zeta0", z.zeta0.re, "zeta_a(0)"),
        Case::info("zeta0_prime", z.zeta0_prime.re, "zeta_a'(0)"),
        Case::info("small_factor", z.small_factor.re, "prod_q det(box|<a,q)^{(-1)^{q+1} q}"),
        Case::info("torsion_log", z.torsion_log.re, ANCHOR_VALUE).flag_if(nu),
        Case::info("quadrature_error", z.err, "plumbing"),
    ];
    if nu {
        cases.push(Case::flagged("zeta0_prime_imag", z.zeta0_prime.im, "zeta_a'(0)"));
        cases.push(Case::flagged("torsion_log_imag", z.torsion_log.im, ANCHOR_VALUE));
    }
    let mut worst: f64 = 0.0;
    for a in gap_cuts(&cfg, 3)? {
        worst = worst.max((zeta_torsion(&cfg, a)?.torsion_log - z.torsion_log).norm());
    }
    cases.push(Case::check("cut_independence", worst, 0.0, tol.get("torsion.cut_independence"), ANCHOR_CUT));
    if cfg.n() == 1 && !nu {
        let e = epstein_torsion_log(&cfg)?;
        cases.push(Case::info("torsion_log_epstein", e, "Kronecker limit formula"));
        cases.push(Case::check("mellin_vs_epstein", (z.torsion_log.re - e).abs() + z.torsion_log.im.abs(), 0.0, tol.get("torsion.routes"), "two continuations of zeta'(0) agree"));
    } else {
        cases.push(Case::skipped("mellin_vs_epstein", "two continuations of zeta'(0) agree"));
    }
    Ok(cases)
}
