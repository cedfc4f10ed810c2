//! Analysis configuration: a TOML document, optionally patched by
//! `MCONVEX_`-prefixed environment variables, deserialized with field paths
//! in every schema error.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use mconvex::surfaces::{CatalogEntry, SurfaceKind};

pub const ENV_PREFIX: &str = "MCONVEX_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AnalysisKind {
    Curvature,
    Reach,
    Barrier,
    Verify,
    Subharmonicity,
    Metric,
    OmegaD,
    ConvexClassify,
}

impl AnalysisKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AnalysisKind::Curvature => "curvature",
            AnalysisKind::Reach => "reach",
            AnalysisKind::Barrier => "barrier",
            AnalysisKind::Verify => "verify",
            AnalysisKind::Subharmonicity => "subharmonicity",
            AnalysisKind::Metric => "metric",
            AnalysisKind::OmegaD => "omega-d",
            AnalysisKind::ConvexClassify => "convex-classify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub analysis: Option<AnalysisKind>,
    #[serde(default)]
    pub seed: u64,
    pub surface: Option<SurfaceConfig>,
    pub barrier: Option<BarrierConfig>,
    #[serde(default)]
    pub sampling: SamplingConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub metric: Option<MetricConfig>,
    pub omega_d: Option<OmegaDConfig>,
    pub convex: Option<ConvexConfig>,
    pub subharmonicity: Option<SubharmonicityConfig>,
}

fn one() -> f64 {
    1.0
}

fn three() -> usize {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Plane {
        #[serde(default = "three")]
        n: usize,
        #[serde(default = "one")]
        extent: f64,
    },
    Sphere {
        #[serde(default = "three")]
        n: usize,
        #[serde(default = "one")]
        radius: f64,
    },
    Cylinder {
        #[serde(default = "three")]
        n: usize,
        #[serde(default = "one")]
        radius: f64,
        #[serde(default = "one")]
        extent: f64,
    },
    Slab {
        #[serde(default = "three")]
        n: usize,
        #[serde(default = "one")]
        half_width: f64,
        #[serde(default = "one")]
        extent: f64,
    },
    Catenoid {
        #[serde(default = "one")]
        scale: f64,
        #[serde(default = "one")]
        extent: f64,
    },
    Helicoid {
        #[serde(default = "one")]
        extent: f64,
    },
    Scherk {
        #[serde(default = "one")]
        extent: f64,
    },
}

impl SurfaceConfig {
    pub fn entry(&self) -> mconvex::Result<CatalogEntry> {
        let (kind, extent) = match *self {
            SurfaceConfig::Plane { n, extent } => (SurfaceKind::Plane { n }, extent),
            SurfaceConfig::Sphere { n, radius } => (SurfaceKind::Sphere { n, radius }, radius),
            SurfaceConfig::Cylinder { n, radius, extent } => (SurfaceKind::Cylinder { n, radius }, extent),
            SurfaceConfig::Slab { n, half_width, extent } => (SurfaceKind::Slab { n, half_width }, extent),
            SurfaceConfig::Catenoid { scale, extent } => (SurfaceKind::Catenoid { scale }, extent),
            SurfaceConfig::Helicoid { extent } => (SurfaceKind::Helicoid, extent),
            SurfaceConfig::Scherk { extent } => (SurfaceKind::Scherk, extent),
        };
        CatalogEntry::new(kind, extent)
    }
}

fn safety() -> f64 {
    0.99
}
fn cap_degree() -> usize {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarrierConfig {
    pub m: usize,
    /// Collar width; defaults to the known (or estimated) reach.
    pub eps: Option<f64>,
    pub alpha: Option<f64>,
    #[serde(default = "safety")]
    pub safety: f64,
    #[serde(default = "cap_degree")]
    pub cap_degree: usize,
    /// Overrides the catalog reach; estimated from samples when neither is
    /// available.
    pub reach: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplingConfig {
    /// Random boundary samples.
    pub boundary: usize,
    /// Points per axis of the interior lattice.
    pub grid: usize,
    /// Collar samples for distance-field checks.
    pub collar: usize,
    /// Collar samples for the finite-difference spectrum check.
    pub fd: usize,
    pub levels: usize,
    pub level_points: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { boundary: 256, grid: 24, collar: 1000, fd: 200, levels: 10, level_points: 16 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub psh: f64,
    pub zero: f64,
    pub grad_floor: f64,
    pub eigen: f64,
    pub level: f64,
    pub fd_eigen: f64,
    pub fd_step: f64,
    pub unit_gradient: f64,
    pub curvature: f64,
    pub subharmonic: f64,
    pub bck_relative: f64,
    pub bck_below: f64,
    pub omega_d_final: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            psh: 1e-8,
            zero: 1e-8,
            grad_floor: 1e-6,
            eigen: 1e-5,
            level: 1e-6,
            fd_eigen: 1e-6,
            fd_step: 2e-5,
            unit_gradient: 1e-6,
            curvature: 1e-6,
            subharmonic: 1e-8,
            bck_relative: 0.01,
            bck_below: 1e-6,
            omega_d_final: 0.01,
        }
    }
}

fn pairs() -> usize {
    100
}
fn max_norm() -> f64 {
    0.9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricPair {
    pub p: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricConfig {
    /// Random pairs drawn with `|p| <= max_norm` (relative to the domain
    /// scale), in addition to `points`.
    #[serde(default = "pairs")]
    pub pairs: usize,
    #[serde(default = "max_norm")]
    pub max_norm: f64,
    #[serde(default)]
    pub points: Vec<MetricPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SliceConfig {
    Disc { center: [f64; 2], radius: f64 },
    PuncturedPlane { points: Vec<[f64; 2]> },
}

fn ks() -> Vec<u64> {
    vec![10, 100, 1000, 10_000]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaDConfig {
    pub slice: SliceConfig,
    pub p: [f64; 3],
    pub q: [f64; 3],
    #[serde(default = "ks")]
    pub ks: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexFixture {
    pub name: String,
    pub functionals: Vec<Vec<f64>>,
    pub constants: Vec<f64>,
    pub interior: Vec<f64>,
    /// Expected classification, checked when given.
    pub contains_plane: Option<bool>,
}

fn trials() -> usize {
    10_000
}
fn exit_radius() -> f64 {
    1e6
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexConfig {
    pub dim: usize,
    pub fixtures: Vec<ConvexFixture>,
    #[serde(default = "trials")]
    pub trials: usize,
    #[serde(default = "exit_radius")]
    pub exit_radius: f64,
}

fn affine() -> usize {
    12
}
fn patches() -> Vec<String> {
    vec!["catenoid".into(), "helicoid".into(), "enneper".into()]
}
fn copies() -> usize {
    1
}
fn grid_n() -> [usize; 2] {
    [8, 16]
}
fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubharmonicityConfig {
    #[serde(default = "affine")]
    pub affine: usize,
    /// Weierstrass patches placed inside the domain.
    #[serde(default = "patches")]
    pub patches: Vec<String>,
    #[serde(default = "copies")]
    pub copies: usize,
    #[serde(default = "grid_n")]
    pub grid: [usize; 2],
    /// Adds a disc tangent to a level set of a flat boundary, where equality holds.
    #[serde(default)]
    pub equality_case: bool,
    #[serde(default = "yes")]
    pub negative_control: bool,
}

/// Configuration problems: unreadable file, bad TOML, or schema violation.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid TOML: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("environment override {name}: {message}")]
    Env { name: String, message: String },
}

impl ConfigError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Schema { path: path.into(), message: message.into() }
    }
}

/// Parses a config document, applies overrides, and checks the schema.
pub fn parse(text: &str, env: &BTreeMap<String, String>) -> Result<AnalysisConfig, ConfigError> {
    let mut doc: toml::Table = text.parse()?;
    for (name, raw) in env {
        let Some(key) = name.strip_prefix(ENV_PREFIX) else { continue };
        let path: Vec<String> = key.split("__").map(|s| s.to_ascii_lowercase()).collect();
        if path.iter().any(String::is_empty) {
            return Err(ConfigError::Env { name: name.clone(), message: "empty path segment".into() });
        }
        set_path(&mut doc, &path, parse_scalar(raw)).map_err(|message| ConfigError::Env { name: name.clone(), message })?;
    }
    let de = toml::Value::Table(doc);
    let cfg: AnalysisConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::schema(path, e.into_inner().to_string())
    })?;
    Ok(cfg)
}

pub fn load(path: &Path, env: &BTreeMap<String, String>) -> Result<AnalysisConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse(&text, env)
}

/// `MCONVEX_*` variables of the current process.
pub fn env_overrides() -> BTreeMap<String, String> {
    std::env::vars().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect()
}

/// Interprets an override as a TOML value, falling back to a plain string.
fn parse_scalar(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match wrapped.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn set_path(doc: &mut toml::Table, path: &[String], value: toml::Value) -> Result<(), String> {
    let (last, parents) = path.split_last().ok_or("empty key")?;
    let mut table = doc;
    for seg in parents {
        let entry = table.entry(seg.clone()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry.as_table_mut().ok_or_else(|| format!("`{seg}` is not a table"))?;
    }
    table.insert(last.clone(), value);
    Ok(())
}

/// Checks that the sections needed by `kind` are present.
pub fn require(cfg: &AnalysisConfig, kind: AnalysisKind) -> Result<(), ConfigError> {
    let need = |present: bool, path: &str| {
        if present {
            Ok(())
        } else {
            Err(ConfigError::schema(path, format!("section required for `{}`", kind.as_str())))
        }
    };
    match kind {
        AnalysisKind::Curvature | AnalysisKind::Reach | AnalysisKind::Metric => need(cfg.surface.is_some(), "surface"),
        AnalysisKind::Barrier | AnalysisKind::Verify => {
            need(cfg.surface.is_some(), "surface")?;
            need(cfg.barrier.is_some(), "barrier")
        }
        AnalysisKind::Subharmonicity => {
            need(cfg.surface.is_some(), "surface")?;
            need(cfg.barrier.is_some(), "barrier")
        }
        AnalysisKind::OmegaD => need(cfg.omega_d.is_some(), "omega_d"),
        AnalysisKind::ConvexClassify => need(cfg.convex.is_some(), "convex"),
    }
}
