//! Exit-code contract, determinism and report formats through the binary.

use std::path::Path;
use std::process::{Command, Output};

use holotorsion::cli::run_with;
use holotorsion::report::from_json;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_holotorsion")).args(args).output().expect("binary runs")
}

fn in_process(args: &[&str]) -> (i32, Vec<u8>, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("holotorsion").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, out, String::from_utf8(err).unwrap())
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.cfg");
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn empty_command_prints_usage() {
    let o = bin(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
    assert_eq!(bin(&["fly"]).status.code(), Some(2));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "command = torsion\ncolour = red\n");
    let (code, _, err) = in_process(&["--config", &unknown]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown key `colour`"), "{err}");
    assert_eq!(in_process(&["torsion", "--tol", "nothing=1"]).0, 2);
    assert_eq!(in_process(&["torsion", "--tol", "torsion.routes=-1"]).0, 2);
    assert_eq!(in_process(&["torsion", "--config", "/nonexistent/run.cfg"]).0, 2);
    assert_eq!(in_process(&["anomaly", "--scale0", "0"]).0, 2);
    let trivial = write_config(dir.path(), "alpha = 0\nbeta = 0\n");
    assert_eq!(in_process(&["torsion", "--config", &trivial]).0, 2);
}

#[test]
fn failing_case_exits_one() {
    let (code, _, err) = in_process(&["torsion", "--tol", "torsion.cut_independence=1e-30"]);
    assert_eq!(code, 1);
    assert!(err.contains("cut_independence"), "{err}");
}

#[test]
fn internal_errors_exit_three() {
    // the lowest eigenvalue of the default model is π²
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("cut = {}\n", std::f64::consts::PI.powi(2)));
    let (code, _, err) = in_process(&["torsion", "--config", &cfg]);
    assert_eq!(code, 3, "{err}");
    let missing = dir.path().join("no/such/dir/report.json");
    assert_eq!(in_process(&["verify-mehler", "--out", missing.to_str().unwrap()]).0, 3);
}

#[test]
fn torsion_report_contents() {
    let o = bin(&["torsion"]);
    assert_eq!(o.status.code(), Some(0));
    let r = from_json(&o.stdout).unwrap();
    assert_eq!(r.suite, "torsion");
    for name in ["zeta0", "zeta0_prime", "torsion_log", "mellin_vs_epstein", "cut_independence"] {
        assert!(r.cases.iter().any(|c| c.name == name), "missing {name}");
    }
}

#[test]
fn anomaly_report_contents() {
    let o = bin(&["anomaly", "--scale0", "1.0", "--scale1", "2.0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = from_json(&o.stdout).unwrap();
    let rhs = r.cases.iter().find(|c| c.name == "anomaly_rhs_exact_zero").unwrap();
    assert_eq!(rhs.measured, Some(0.0));
    assert!(r.cases.iter().any(|c| c.name == "anomaly_lhs"));
    assert!(r.passed());
}

#[test]
fn config_file_supplies_command_and_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let cfg = write_config(dir.path(), &format!("command = verify-mehler\nformat = csv\noutput = {}\n", out.display()));
    let (code, stdout, _) = in_process(&["--config", &cfg]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let rows = rd.records().count();
    assert_eq!(text.lines().count(), rows + 1);
    assert_eq!(rows, 4);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify-algebra", "--seed", "17", "--no-wall-time"];
    let (c1, a, _) = in_process(&args);
    let (c2, b, _) = in_process(&args);
    let threaded = std::thread::spawn(move || in_process(&args).1).join().unwrap();
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert_eq!(a, threaded);
    let (_, other, _) = in_process(&["verify-algebra", "--seed", "18", "--no-wall-time"]);
    assert_eq!(from_json(&other).unwrap().cases.len(), from_json(&a).unwrap().cases.len());
    let proc = bin(&args);
    assert_eq!(proc.stdout, a);
}

#[test]
fn non_unitary_values_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "non_unitary = true\ntau = 0.1+1.0i\nalpha = 0.4+0.03i\nbeta = 0.3+0.02i\n");
    let (code, out, err) = in_process(&["torsion", "--config", &cfg]);
    assert_eq!(code, 0, "{err}");
    let r = from_json(&out).unwrap();
    let status = |n: &str| r.cases.iter().find(|c| c.name == n).unwrap().status;
    assert_eq!(status("torsion_log"), holotorsion::Status::Flagged);
    assert_eq!(status("torsion_log_imag"), holotorsion::Status::Flagged);
    assert_eq!(status("mellin_vs_epstein"), holotorsion::Status::Skipped);
    assert_eq!(status("cut_independence"), holotorsion::Status::Pass);
}
