//! Argument parsing and the exit-code contract.
//!
//! Exit codes: 0 all cases pass, 1 some case failed, 2 usage or config
//! error, 3 internal error (computation or output failure).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{CommandFactory, Parser};

use crate::config::{Command, ConfigError, Format, RunConfig};
use crate::report::{emit, write_atomic};
use crate::suites::{self, SuiteError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "holotorsion", version, about = "Verification suites and torsion computations for flat complex tori")]
pub struct Args {
    /// What to run; may also come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed for randomized property checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Tolerance override, repeatable.
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    pub tol: Vec<String>,
    /// First scale of the anomaly check.
    #[arg(long)]
    pub scale0: Option<f64>,
    /// Second scale of the anomaly check.
    #[arg(long)]
    pub scale1: Option<f64>,
    /// Write wall_time = 0 so identical runs give identical bytes.
    #[arg(long)]
    pub no_wall_time: bool,
}

/// Merges defaults, the config file and flags, in that order of precedence.
pub fn build_config(args: &Args) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io { path: path.display().to_string(), reason: e.to_string() })?;
        cfg.apply_text(&text)?;
    }
    if let Some(c) = args.command {
        cfg.command = Some(c);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = &args.out {
        cfg.output = Some(o.clone());
    }
    if let Some(f) = args.format {
        cfg.format = f;
    }
    for pair in &args.tol {
        cfg.tolerances.set_pair(pair)?;
    }
    if let Some(s) = args.scale0 {
        cfg.scale0 = s;
    }
    if let Some(s) = args.scale1 {
        cfg.scale1 = s;
    }
    if args.no_wall_time {
        cfg.record_wall_time = false;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Runs the CLI with explicit arguments and output streams; returns the
/// exit code.
pub fn run_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let out: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let Some(command) = cfg.command else {
        let _ = writeln!(stderr, "error: no command given\n\n{}", Args::command().render_usage());
        return EXIT_CONFIG;
    };
    let report = match suites::run(command, &cfg) {
        Ok(r) => r,
        Err(SuiteError::Config(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_CONFIG;
        }
        Err(e) => {
            let _ = writeln!(stderr, "internal error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let bytes = emit(&report, cfg.format);
    let written = match &cfg.output {
        Some(path) => write_atomic(path, &bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(&bytes).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "internal error: {e}");
        return EXIT_INTERNAL;
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        let _ = writeln!(stderr, "{}: {} cases, all pass ({:.2} s)", report.suite, report.cases.len(), report.wall_time);
        EXIT_PASS
    } else {
        let _ = writeln!(stderr, "{}: {} of {} cases failed: {}", report.suite, failed.len(), report.cases.len(), failed.join(", "));
        EXIT_FAIL
    }
}

pub fn main_with_args(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
