//! Acceptance criteria 1 to 6 with pinned tolerances and time limits.
//!
//! Prints one line per criterion, then fails if any criterion failed.

use std::time::{Duration, Instant};

use holotorsion::config::Tolerances;
use holotorsion::{run, Command, RunConfig, Status};

struct Criterion {
    id: usize,
    title: &'static str,
    command: Command,
    limit: Duration,
    tolerances: &'static [(&'static str, f64)],
    /// Cases that must be present with status `pass`.
    required: &'static [&'static str],
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "algebra: Clifford relation, supertrace rule, psi_t homomorphism, delta_eps composition (200 exact cases)",
        command: Command::VerifyAlgebra,
        limit: Duration::from_secs(5),
        tolerances: &[],
        required: &["clifford_relation_mismatches", "supertrace_top_monomial_mismatches", "supertrace_vs_spinor_matrix_mismatches", "psi_t_homomorphism_mismatches", "getzler_composition_mismatches"],
    },
    Criterion {
        id: 2,
        title: "Chern-Weil: td multiplicativity, sigma_p trace identity 1e-12, b-derivative vs FD 1e-8",
        command: Command::VerifyChernWeil,
        limit: Duration::from_secs(10),
        tolerances: &[("chern_weil.trace_identity", 1e-12), ("chern_weil.b_derivative", 1e-8)],
        required: &["multiplicativity_mismatches", "sigma_p_trace_identity", "b_derivative_vs_central_difference"],
    },
    Criterion {
        id: 3,
        title: "Mehler: closed form vs recursion k<=4 1e-10, residual ratio 4 +- 0.3",
        command: Command::VerifyMehler,
        limit: Duration::from_secs(30),
        tolerances: &[("mehler.routes", 1e-10), ("mehler.residual_ratio", 0.3)],
        required: &["closed_form_vs_recursion", "closed_form_vs_recursion_exact_mismatches", "residual_ratio_under_halving"],
    },
    Criterion {
        id: 4,
        title: "parametrix: Poisson identity 1e-12 on [0.1, 2], error order >= N - n/2 + 0.8 for N = 2, 3",
        command: Command::VerifyParametrix,
        limit: Duration::from_secs(60),
        tolerances: &[("parametrix.poisson", 1e-12), ("parametrix.order_margin", 0.8)],
        required: &["poisson_heat_trace_identity", "error_order_n2", "error_order_n3"],
    },
    Criterion {
        id: 5,
        title: "torsion: cut independence over 3 gaps 1e-8, Mellin vs Epstein 1e-8 (tau = i, lambda = 1, chi = (1/2, 1/2))",
        command: Command::Torsion,
        limit: Duration::from_secs(60),
        tolerances: &[("torsion.cut_independence", 1e-8), ("torsion.routes", 1e-8)],
        required: &["cut_independence", "mellin_vs_epstein"],
    },
    Criterion {
        id: 6,
        title: "variation/anomaly: FD vs -M0 1e-4, |LHS| < 1e-6 with RHS = 0, D^2 = 2 box on 20 modes 1e-12",
        command: Command::Anomaly,
        limit: Duration::from_secs(120),
        tolerances: &[("variation.fd", 1e-4), ("anomaly.lhs", 1e-6), ("variation.d_squared", 1e-12)],
        required: &["fd_derivative_plus_m0", "anomaly_lhs", "anomaly_rhs_exact_zero", "d_squared_vs_two_box", "d_squared_dirac_vs_dolbeault"],
    },
];

fn config_for(c: &Criterion) -> RunConfig {
    let mut tolerances = Tolerances::default();
    for &(name, value) in c.tolerances {
        tolerances.set(name, value).unwrap();
    }
    RunConfig { command: Some(c.command), tolerances, seed: 2024, cases: 200, scale0: 1.0, scale1: 2.0, ..RunConfig::default() }
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    let total = Instant::now();
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = run(c.command, &config_for(c));
        let elapsed = start.elapsed();
        let verdict = match &outcome {
            Err(e) => Err(format!("error: {e}")),
            Ok(report) => {
                let missing: Vec<&str> = c.required.iter().copied().filter(|name| !report.cases.iter().any(|k| k.name == *name && k.status == Status::Pass)).collect();
                let fails: Vec<&str> = report.failures().map(|k| k.name.as_str()).collect();
                if !fails.is_empty() {
                    Err(format!("failed cases: {}", fails.join(", ")))
                } else if !missing.is_empty() {
                    Err(format!("required cases not passing: {}", missing.join(", ")))
                } else if elapsed > c.limit {
                    Err("time limit exceeded".to_string())
                } else {
                    Ok(())
                }
            }
        };
        let status = if verdict.is_ok() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} ({:.2} s, limit {} s) {}{}", c.id, elapsed.as_secs_f64(), c.limit.as_secs(), c.title, verdict.as_ref().err().map_or(String::new(), |e| format!(" [{e}]")));
        if verdict.is_err() {
            failed.push(c.id);
        }
    }
    println!("total wall time: {:.2} s (target 300 s)", total.elapsed().as_secs_f64());
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
