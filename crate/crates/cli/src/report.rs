//! Reports and their serializations.
//!
//! Floats are written with 17 significant digits in json and csv, and 8 in
//! text. Field order is fixed.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported value, no assertion.
    Info,
    /// Reported under a convention that is not asserted.
    Flagged,
    /// Not applicable to this model.
    Skipped,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Info => "info",
            Status::Flagged => "flagged",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    /// The identity being checked, or `plumbing`.
    pub anchor: String,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Case {
    /// Passes when `|measured − expected| ≤ tolerance`.
    pub fn check(name: &str, measured: f64, expected: f64, tolerance: f64, anchor: &str) -> Self {
        let ok = (measured - expected).abs() <= tolerance;
        Case {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: finite(measured),
            expected: finite(expected),
            tolerance: Some(tolerance),
            anchor: anchor.into(),
        }
    }

    /// Passes when `measured ≥ bound`; `expected` holds the bound and
    /// `tolerance` is empty.
    pub fn at_least(name: &str, measured: f64, bound: f64, anchor: &str) -> Self {
        Case {
            name: name.into(),
            status: if measured >= bound { Status::Pass } else { Status::Fail },
            measured: finite(measured),
            expected: finite(bound),
            tolerance: None,
            anchor: anchor.into(),
        }
    }

    pub fn info(name: &str, measured: f64, anchor: &str) -> Self {
        Case { name: name.into(), status: Status::Info, measured: finite(measured), expected: None, tolerance: None, anchor: anchor.into() }
    }

    pub fn flagged(name: &str, measured: f64, anchor: &str) -> Self {
        Case { status: Status::Flagged, ..Case::info(name, measured, anchor) }
    }

    pub fn skipped(name: &str, anchor: &str) -> Self {
        Case { name: name.into(), status: Status::Skipped, measured: None, expected: None, tolerance: None, anchor: anchor.into() }
    }

    /// Downgrades a check to `flagged` (kept values, no assertion).
    pub fn flag_if(mut self, flag: bool) -> Self {
        if flag {
            self.status = Status::Flagged;
        }
        self
    }

    pub fn with_prefix(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}/{}", self.name);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub cases: Vec<Case>,
    /// Seconds.
    pub wall_time: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.status == Status::Fail)
    }
}

/// `serde_json` formatter that writes floats as `d.dddddddddddddddde±x`.
struct SigFormatter;

impl serde_json::ser::Formatter for SigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }
}

fn sci(x: Option<f64>, digits: usize) -> String {
    x.map_or_else(String::new, |v| format!("{v:.prec$e}", prec = digits - 1))
}

pub fn to_json(report: &Report) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SigFormatter);
    report.serialize(&mut ser).expect("report serialization is infallible");
    out.push(b'\n');
    out
}

pub fn from_json(bytes: &[u8]) -> serde_json::Result<Report> {
    serde_json::from_slice(bytes)
}

pub fn to_csv(report: &Report) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_ok = "writing csv to memory cannot fail";
    w.write_record(["suite", "name", "status", "measured", "expected", "tolerance", "anchor"]).expect(io_ok);
    for c in &report.cases {
        w.write_record([report.suite.as_str(), &c.name, c.status.name(), &sci(c.measured, 17), &sci(c.expected, 17), &sci(c.tolerance, 17), &c.anchor]).expect(io_ok);
    }
    w.into_inner().expect(io_ok)
}

pub fn to_text(report: &Report) -> Vec<u8> {
    let header = ["name", "status", "measured", "expected", "tolerance", "anchor"];
    let rows: Vec<[String; 6]> = report
        .cases
        .iter()
        .map(|c| [c.name.clone(), c.status.name().into(), sci(c.measured, 8), sci(c.expected, 8), sci(c.tolerance, 8), c.anchor.clone()])
        .collect();
    let mut width = header.map(|h| h.chars().count());
    for r in &rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut s = String::new();
    let _ = writeln!(s, "suite: {}  wall_time: {} s", report.suite, sci(Some(report.wall_time), 8));
    let line = |s: &mut String, cells: &[&str]| {
        let mut l = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            let pad = width[i].saturating_sub(cell.chars().count());
            l.push_str(cell);
            if i + 1 < cells.len() {
                l.extend(std::iter::repeat_n(' ', pad));
            }
        }
        let _ = writeln!(s, "{}", l.trim_end());
    };
    line(&mut s, &header);
    for r in &rows {
        line(&mut s, &r.each_ref().map(String::as_str));
    }
    s.into_bytes()
}

pub fn emit(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Text => to_text(report),
    }
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            suite: "torsion".into(),
            cases: vec![
                Case::check("mellin_vs_epstein", 1.0 / 3.0 * 1e-10, 0.0, 1e-8, "two continuations of zeta'(0)"),
                Case::info("zeta0_prime", -0.123_456_789_012_345_68, "zeta'(0)"),
                Case::at_least("slope", 1.9, 1.8, "order"),
                Case::skipped("epstein", "plumbing"),
                Case::check("nan", f64::NAN, 0.0, 1.0, "plumbing"),
            ],
            wall_time: 0.25,
        }
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let bytes = to_json(&r);
        assert_eq!(from_json(&bytes).unwrap(), r);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with("{\"suite\":\"torsion\",\"cases\":[{\"name\""));
        assert!(text.contains("-1.2345678901234568e-1"), "{text}");
        assert!(text.contains("\"wall_time\":2.5000000000000000e-1"));
        assert!(text.contains("\"measured\":null"));
    }

    #[test]
    fn status_and_failures() {
        let r = sample();
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.cases[0].status, Status::Pass);
        assert_eq!(r.cases[2].status, Status::Pass);
        assert_eq!(Case::at_least("s", 1.7, 1.8, "").status, Status::Fail);
        assert_eq!(Case::check("c", 1.0, 0.0, 0.5, "").flag_if(true).status, Status::Flagged);
    }

    #[test]
    fn csv_rows() {
        let r = sample();
        let text = String::from_utf8(to_csv(&r)).unwrap();
        assert_eq!(text.lines().count(), r.cases.len() + 1);
        let empty = Report { suite: "x".into(), cases: vec![], wall_time: 0.0 };
        assert_eq!(String::from_utf8(to_csv(&empty)).unwrap().lines().count(), 1);
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let row = rd.records().nth(1).unwrap().unwrap();
        assert_eq!(row[3].parse::<f64>().unwrap(), -0.123_456_789_012_345_68);
    }

    #[test]
    fn text_table() {
        let text = String::from_utf8(to_text(&sample())).unwrap();
        assert!(text.contains("-1.2345679e-1"));
        assert_eq!(text.lines().count(), 2 + 5);
        let empty = Report { suite: "x".into(), cases: vec![], wall_time: 0.0 };
        let t = String::from_utf8(to_text(&empty)).unwrap();
        assert_eq!(t.lines().count(), 2);
        assert!(t.lines().nth(1).unwrap().starts_with("name"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/r.json"), b"x").is_err());
    }
}
