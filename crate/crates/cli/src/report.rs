//! Report records and their serializations. Key order is fixed by hand and
//! floats are written with 17 significant digits, so equal reports are equal
//! bytes.

use std::fmt::Write as _;

use mconvex::barrier::CheckSummary;
use mconvex::numkit::VecN;

use crate::config::AnalysisConfig;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub samples: usize,
    pub failures: usize,
    /// Reproduction locator: the worst (or first failing) point.
    pub location: Option<Vec<f64>>,
    pub note: String,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, passed: bool, measured: f64, threshold: f64) -> Self {
        CheckRecord {
            name: name.into(),
            passed,
            measured,
            threshold,
            samples: 1,
            failures: usize::from(!passed),
            location: None,
            note: String::new(),
        }
    }

    pub fn counts(mut self, samples: usize, failures: usize) -> Self {
        self.samples = samples;
        self.failures = failures;
        self
    }

    pub fn at(mut self, x: &VecN) -> Self {
        self.location = Some(x.to_vec());
        self
    }

    pub fn at_slice(mut self, x: &[f64]) -> Self {
        self.location = Some(x.to_vec());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn from_summary(s: &CheckSummary) -> Self {
        let loc = s.failed_points.first().or(s.worst_point.as_ref());
        CheckRecord {
            name: s.name.clone(),
            passed: s.passed(),
            measured: s.worst,
            threshold: s.threshold,
            samples: s.samples,
            failures: s.failures,
            location: loc.map(VecN::to_vec),
            note: String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub analysis: String,
    pub seed: u64,
    pub config: AnalysisConfig,
    pub checks: Vec<CheckRecord>,
    /// Named scalar results, in insertion order.
    pub metrics: Vec<(String, f64)>,
}

impl Report {
    pub fn new(analysis: &str, config: &AnalysisConfig) -> Self {
        Report { analysis: analysis.to_string(), seed: config.seed, config: config.clone(), checks: Vec::new(), metrics: Vec::new() }
    }

    pub fn check(&mut self, c: CheckRecord) {
        self.checks.push(c);
    }

    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push((name.into(), value));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }
}

/// `{:.16e}` for finite values; JSON has no literal for the rest.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "\"nan\"".into()
    } else if x > 0.0 {
        "\"inf\"".into()
    } else {
        "\"-inf\"".into()
    }
}

fn fmt_csv_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn json_vec(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| fmt_f64(*x)).collect();
    format!("[{}]", items.join(","))
}

/// One JSON object per line: header, checks, metrics, summary.
pub fn to_json_lines(r: &Report) -> String {
    let mut out = String::new();
    let config = serde_json::to_string(&r.config).expect("config serializes");
    let _ = writeln!(
        out,
        "{{\"record\":\"header\",\"format_version\":{},\"tool_version\":{},\"analysis\":{},\"seed\":{},\"config\":{}}}",
        FORMAT_VERSION,
        json_str(env!("CARGO_PKG_VERSION")),
        json_str(&r.analysis),
        r.seed,
        config
    );
    for c in &r.checks {
        let loc = c.location.as_deref().map_or_else(|| "null".to_string(), json_vec);
        let _ = writeln!(
            out,
            "{{\"record\":\"check\",\"name\":{},\"passed\":{},\"measured\":{},\"threshold\":{},\"samples\":{},\"failures\":{},\"location\":{},\"note\":{}}}",
            json_str(&c.name),
            c.passed,
            fmt_f64(c.measured),
            fmt_f64(c.threshold),
            c.samples,
            c.failures,
            loc,
            json_str(&c.note)
        );
    }
    for (k, v) in &r.metrics {
        let _ = writeln!(out, "{{\"record\":\"metric\",\"name\":{},\"value\":{}}}", json_str(k), fmt_f64(*v));
    }
    let failed = r.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(
        out,
        "{{\"record\":\"summary\",\"verdict\":{},\"checks\":{},\"failed\":{}}}",
        json_str(r.verdict()),
        r.checks.len(),
        failed
    );
    out
}

pub const CSV_HEADER: [&str; 8] = ["name", "passed", "measured", "threshold", "samples", "failures", "location", "note"];

/// One row per check; header only when there are none.
pub fn to_csv(r: &Report) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for c in &r.checks {
        let loc = c
            .location
            .as_ref()
            .map(|v| v.iter().map(|x| fmt_csv_f64(*x)).collect::<Vec<_>>().join(" "))
            .unwrap_or_default();
        w.write_record([
            c.name.clone(),
            c.passed.to_string(),
            fmt_csv_f64(c.measured),
            fmt_csv_f64(c.threshold),
            c.samples.to_string(),
            c.failures.to_string(),
            loc,
            c.note.clone(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields is utf-8"))
}

/// A pipeline failure as a single JSON line.
pub fn failure_record(analysis: &str, stage: &str, error: &str) -> String {
    format!(
        "{{\"record\":\"failure\",\"analysis\":{},\"stage\":{},\"error\":{}}}",
        json_str(analysis),
        json_str(stage),
        json_str(error)
    )
}
