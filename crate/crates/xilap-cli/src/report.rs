//! JSON reports and CSV grids.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use xilap::verify::{CatalogEntry, IdentityCheck, MetricReport, ScanResult, TRIANGLE_SLACK};
use xilap::C64;

use crate::config::{RunConfig, ScanKind};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub scans: Vec<ScanRecord>,
    pub wall_ms: u64,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Report { version: String::from(VERSION), config: config.clone(), checks: vec![], scans: vec![], wall_ms: 0 }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.scans.iter().all(|s| s.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Metric sampling details attached to the metric check record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricDetails {
    pub x: f64,
    pub beta: f64,
    pub seed: u64,
    pub m0: f64,
    pub min_positive: f64,
    pub max_asymmetry: f64,
    pub worst_triangle: f64,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub domain: String,
    pub n_samples: usize,
    /// `null` when some residual was not finite.
    pub max_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<MetricDetails>,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl CheckRecord {
    pub fn from_check(c: &IdentityCheck) -> Self {
        CheckRecord {
            id: c.id.clone(),
            anchor: c.anchor.clone(),
            domain: c.domain.clone(),
            n_samples: c.n_samples(),
            max_residual: finite(c.max_residual()),
            tolerance: c.tolerance,
            pass: c.pass(),
            error: None,
            metric: None,
        }
    }

    /// Record for an identity whose run aborted.
    pub fn from_error(e: &CatalogEntry, err: xilap::Error) -> Self {
        CheckRecord {
            id: String::from(e.id),
            anchor: String::from(e.anchor),
            domain: String::from(e.domain),
            n_samples: 0,
            max_residual: None,
            tolerance: 0.0,
            pass: false,
            error: Some(err.to_string()),
            metric: None,
        }
    }

    pub fn from_metric(e: &CatalogEntry, rep: &MetricReport) -> Self {
        let residual = if rep.min_positive > 0.0 { finite(rep.worst_triangle.max(0.0)) } else { None };
        CheckRecord {
            id: String::from(e.id),
            anchor: String::from(e.anchor),
            domain: String::from(e.domain),
            n_samples: rep.triples,
            max_residual: residual,
            tolerance: TRIANGLE_SLACK,
            pass: rep.pass(),
            error: None,
            metric: Some(MetricDetails {
                x: rep.x,
                beta: rep.beta,
                seed: rep.seed,
                m0: rep.m0,
                min_positive: rep.min_positive,
                max_asymmetry: rep.max_asymmetry,
                worst_triangle: rep.worst_triangle,
                violations: rep.violations,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub target: String,
    pub kind: ScanKind,
    pub n_points: usize,
    pub min: f64,
    pub max: f64,
    pub sign_changes: usize,
    pub monotone: bool,
    pub exponent: Option<f64>,
    pub expected: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

impl ScanRecord {
    /// Positivity passes on `min > 0`, monotonicity on strict increase, and
    /// a growth fit on `|exponent − expected| ≤ tolerance` when an exponent is expected.
    pub fn new(kind: ScanKind, res: &ScanResult, expected: Option<f64>, tolerance: f64) -> Self {
        let pass = match kind {
            ScanKind::Positivity => res.positive(),
            ScanKind::Monotone => res.monotone,
            ScanKind::Growth => match (res.exponent, expected) {
                (Some(e), Some(want)) => (e - want).abs() <= tolerance,
                (Some(e), None) => e.is_finite(),
                (None, _) => false,
            },
        };
        ScanRecord {
            target: res.target.clone(),
            kind,
            n_points: res.grid.len(),
            min: res.min,
            max: res.max,
            sign_changes: res.sign_changes,
            monotone: res.monotone,
            exponent: res.exponent,
            expected,
            tolerance: (kind == ScanKind::Growth && expected.is_some()).then_some(tolerance),
            pass,
        }
    }
}

pub const CSV_HEADER: &str = "input_re,input_im,value_re,value_im,err_estimate";

/// Shortest round-trip decimal, in exponent form outside `[1e-5, 1e16)`.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-5..1e16).contains(&a) || !v.is_finite() {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub input_re: f64,
    pub input_im: f64,
    pub value_re: f64,
    pub value_im: f64,
    pub err_estimate: f64,
}

impl Row {
    pub fn new(z: C64, v: C64, err: f64) -> Self {
        Row { input_re: z.re, input_im: z.im, value_re: v.re, value_im: v.im, err_estimate: err }
    }
}

pub fn csv(rows: &[Row]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let cols = [r.input_re, r.input_im, r.value_re, r.value_im, r.err_estimate];
        let line: Vec<String> = cols.iter().map(|&v| fmt_num(v)).collect();
        let _ = writeln!(s, "{}", line.join(","));
    }
    s
}

/// `eval` output in JSON form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalOutput {
    pub version: String,
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub wall_ms: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, 1.0, -2.5, 1e-300, 6.02e23, std::f64::consts::PI, -3.3e-7] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1e-7), "1e-7");
    }

    #[test]
    fn csv_layout() {
        let rows = [Row::new(C64::new(0.5, 0.0), C64::new(1.5, -1.0), 0.0)];
        assert_eq!(csv(&rows), "input_re,input_im,value_re,value_im,err_estimate\n0.5,0,1.5,-1,0\n");
    }
}
