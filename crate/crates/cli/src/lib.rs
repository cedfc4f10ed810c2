//! Command-line front end for the `mconvex` analyses.
//!
//! [`execute`] holds everything the binary does apart from argument parsing,
//! so exit codes and output bytes can be tested in-process.

pub mod config;
pub mod pipeline;
pub mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use mconvex::Exec;

use config::{AnalysisConfig, AnalysisKind, ConfigError};
use pipeline::RunError;
use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    JsonLines,
    CsvSummary,
}

/// Resolved command-line options.
#[derive(Debug, Clone, Default)]
pub struct Invocation {
    /// `None` takes the analysis from the config file.
    pub analysis: Option<AnalysisKind>,
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub workers: Option<usize>,
    /// Environment overrides; usually [`config::env_overrides`].
    pub env: BTreeMap<String, String>,
}

/// What a run produced: the exit code, the rendered report (if any) and the
/// diagnostics destined for stderr.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub output: Option<Vec<u8>>,
    pub stderr: String,
}

pub fn render(r: &Report, format: Format) -> Result<Vec<u8>, csv::Error> {
    Ok(match format {
        Format::JsonLines => report::to_json_lines(r).into_bytes(),
        Format::CsvSummary => report::to_csv(r)?.into_bytes(),
    })
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so readers never see a partial report.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn load(inv: &Invocation) -> Result<AnalysisConfig, ConfigError> {
    let mut cfg = match &inv.config {
        Some(p) => config::load(p, &inv.env)?,
        None => config::parse("", &inv.env)?,
    };
    if let Some(s) = inv.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn pool(workers: Option<usize>) -> Result<Option<rayon::ThreadPool>, String> {
    match workers {
        Some(0) => Err("--workers must be at least 1".into()),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().map(Some).map_err(|e| e.to_string()),
        None => Ok(None),
    }
}

/// Runs one invocation end to end, writing the report to `inv.out` when set.
/// When `out` is unset the rendered bytes are returned in [`Outcome::output`]
/// for the caller to print.
pub fn execute(inv: &Invocation) -> Outcome {
    let fail = |code, msg: String| Outcome { code, output: None, stderr: msg };
    let cfg = match load(inv) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_CONFIG, format!("configuration error: {e}\n")),
    };
    let kind_name = inv.analysis.or(cfg.analysis).map_or("unknown", |k| k.as_str());
    let pool = match pool(inv.workers) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_CONFIG, format!("configuration error: {e}\n")),
    };
    let exec = Exec::available();
    let job = || pipeline::run(&cfg, inv.analysis, exec);
    let result = match &pool {
        Some(p) => p.install(job),
        None => job(),
    };
    let rep = match result {
        Ok(r) => r,
        Err(RunError::Config(e)) => return fail(EXIT_CONFIG, format!("configuration error: {e}\n")),
        Err(RunError::Pipeline(e)) => {
            return fail(EXIT_FAILED, report::failure_record(kind_name, e.stage, &e.source.to_string()) + "\n")
        }
    };
    let bytes = match render(&rep, inv.format) {
        Ok(b) => b,
        Err(e) => return fail(EXIT_FAILED, report::failure_record(kind_name, "render", &e.to_string()) + "\n"),
    };
    let code = if rep.passed() { EXIT_OK } else { EXIT_FAILED };
    let stderr = if rep.passed() {
        String::new()
    } else {
        let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        format!("verdict: fail ({})\n", failed.join(", "))
    };
    match &inv.out {
        Some(path) => match write_atomic(path, &bytes) {
            Ok(()) => Outcome { code, output: None, stderr },
            Err(e) => fail(EXIT_FAILED, report::failure_record(kind_name, "write", &e.to_string()) + "\n"),
        },
        None => Outcome { code, output: Some(bytes), stderr },
    }
}
