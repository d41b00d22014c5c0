//! Verification suites. Each returns the cases of one report.

pub mod algebra;
pub mod anomaly;
pub mod chern_weil;
pub mod mehler;
pub mod parametrix;
pub mod torsion;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{Command, ConfigError, RunConfig};
use crate::report::{Case, Report};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Internal(String),
}

macro_rules! internal_from {
    ($($t:ty),*) => {
        $(impl From<$t> for SuiteError {
            fn from(e: $t) -> Self {
                SuiteError::Internal(format!("{e}"))
            }
        })*
    };
}

internal_from!(
    holotorsion_core::algebra::AlgebraError,
    holotorsion_core::chern_weil::ChernWeilError,
    holotorsion_core::mehler::MehlerError,
    holotorsion_core::parametrix::ParametrixError,
    holotorsion_core::torus::TorusError
);

/// Random stream `stream` of the run seed.
///
/// Every randomized property draws from its own ChaCha8 stream of the single
/// seed, so adding or reordering properties never shifts another's inputs.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub fn log_space(a: f64, b: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (k - 1) as f64).exp()).collect()
}

/// Suite name and runner for a single-suite command.
fn suite(command: Command) -> Option<(&'static str, fn(&RunConfig) -> Result<Vec<Case>, SuiteError>)> {
    Some(match command {
        Command::VerifyAlgebra => ("algebra", algebra::run),
        Command::VerifyChernWeil => ("chern_weil", chern_weil::run),
        Command::VerifyMehler => ("mehler", mehler::run),
        Command::VerifyParametrix => ("parametrix", parametrix::run),
        Command::Torsion => ("torsion", torsion::run),
        Command::Anomaly => ("anomaly", anomaly::run),
        Command::Report => return None,
    })
}

/// Runs `command`; `report` runs every suite and prefixes case names.
pub fn run(command: Command, config: &RunConfig) -> Result<Report, SuiteError> {
    config.validate()?;
    let start = Instant::now();
    let (name, cases) = match suite(command) {
        Some((name, f)) => (name, f(config)?),
        None => {
            let mut all = Vec::new();
            for c in [Command::VerifyAlgebra, Command::VerifyChernWeil, Command::VerifyMehler, Command::VerifyParametrix, Command::Torsion, Command::Anomaly] {
                let (name, f) = suite(c).expect("single suite");
                all.extend(f(config)?.into_iter().map(|case| case.with_prefix(name)));
            }
            ("report", all)
        }
    };
    let wall_time = if config.record_wall_time { start.elapsed().as_secs_f64() } else { 0.0 };
    Ok(Report { suite: name.into(), cases, wall_time })
}
