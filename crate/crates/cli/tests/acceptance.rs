//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mconvex::numkit::sym_eigen;
use mconvex::surfaces::{CatalogEntry, SurfaceKind};
use mconvex::tubular::{collar_samples, distance_jet};
use mconvex::Exec;
use mconvex_cli::config::{self, AnalysisConfig};
use mconvex_cli::report::Report;
use mconvex_cli::{execute, pipeline, Format, Invocation};

type Run = (&'static str, Result<(Report, Duration), String>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn cfg(text: &str) -> AnalysisConfig {
    config::parse(text, &BTreeMap::new()).unwrap_or_else(|e| panic!("fixture config: {e}\n{text}"))
}

fn run(text: &str) -> Result<(Report, Duration), String> {
    let c = cfg(text);
    let t = Instant::now();
    let r = pipeline::run(&c, None, Exec::available()).map_err(|e| e.to_string())?;
    Ok((r, t.elapsed()))
}

fn check<'a>(r: &'a Report, name: &str) -> Option<&'a mconvex_cli::report::CheckRecord> {
    r.checks.iter().find(|c| c.name == name)
}

fn metric(r: &Report, name: &str) -> Option<f64> {
    r.metrics.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
}

fn failed(r: &Report) -> Vec<String> {
    r.checks.iter().filter(|c| !c.passed).map(|c| format!("{} (measured {:e})", c.name, c.measured)).collect()
}

fn surface_toml(name: &str) -> &'static str {
    match name {
        "sphere" => "type = \"sphere\"\nn = 3\nradius = 1.0",
        "plane" => "type = \"plane\"\nn = 3\nextent = 2.0",
        "cylinder" => "type = \"cylinder\"\nn = 3\nradius = 1.0\nextent = 2.0",
        "slab" => "type = \"slab\"\nn = 3\nhalf_width = 1.0\nextent = 2.0",
        "catenoid" => "type = \"catenoid\"\nscale = 1.0\nextent = 1.5",
        "helicoid" => "type = \"helicoid\"\nextent = 1.5",
        "scherk" => "type = \"scherk\"\nextent = 1.0",
        _ => unreachable!(),
    }
}

const COLLAR_SURFACES: [&str; 5] = ["sphere", "plane", "cylinder", "slab", "catenoid"];
const CATALOG: [&str; 7] = ["sphere", "plane", "cylinder", "slab", "catenoid", "helicoid", "scherk"];

fn reach_config(name: &str, collar: usize, fd: usize, seed: u64) -> String {
    format!(
        "analysis = \"reach\"\nseed = {seed}\n[surface]\n{}\n[barrier]\nm = 2\n[sampling]\ncollar = {collar}\nfd = {fd}\n",
        surface_toml(name)
    )
}

/// Reach reports for every catalog surface: 10⁴ collar samples on the five
/// collar surfaces, 10³ finite-difference points everywhere.
fn reach_reports() -> Vec<Run> {
    CATALOG
        .iter()
        .enumerate()
        .map(|(i, &name)| {
            let collar = if COLLAR_SURFACES.contains(&name) { 10_000 } else { 1_000 };
            (name, run(&reach_config(name, collar, 1_000, 100 + i as u64)))
        })
        .collect()
}

fn criterion_1(reports: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for (name, r) in reports.iter().filter(|(n, _)| COLLAR_SURFACES.contains(n)) {
        match r {
            Err(e) => bad.push(format!("{name}: {e}")),
            Ok((rep, t)) => {
                slowest = slowest.max(*t);
                for c in ["unit gradient", "hessian annihilates gradient"] {
                    match check(rep, c) {
                        Some(k) if k.passed && k.samples >= 10_000 && k.threshold == 1e-6 => {}
                        Some(k) => bad.push(format!("{name}: {c} measured {:e} over {} samples", k.measured, k.samples)),
                        None => bad.push(format!("{name}: missing {c}")),
                    }
                }
                if *t > Duration::from_secs(60) {
                    bad.push(format!("{name}: {:.1}s > 60s", t.as_secs_f64()));
                }
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("5 surfaces x 1e4 samples, slowest {:.1}s", slowest.as_secs_f64()) } else { bad.join("; ") })
}

fn sphere_closed_form() -> Result<f64, String> {
    let e = CatalogEntry::new(SurfaceKind::Sphere { n: 3, radius: 1.0 }, 1.0).map_err(|e| e.to_string())?;
    let d = e.domain().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let b = e.boundary_samples(1_000, &mut rng);
    let s = collar_samples(d, &b, (0.0, 0.9), &mut rng).map_err(|e| e.to_string())?;
    let mut worst = 0.0_f64;
    for c in &s {
        let j = distance_jet(d, &c.point).map_err(|e| e.to_string())?;
        let want = 1.0 / (1.0 - c.delta.abs());
        let ev = sym_eigen(&j.hessian).map_err(|e| e.to_string())?.values;
        for v in j.transported.iter().chain(&ev[1..]) {
            worst = worst.max((v - want).abs() / want);
        }
    }
    Ok(worst)
}

fn criterion_2(reports: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0_f64;
    for (name, r) in reports {
        match r {
            Err(e) => bad.push(format!("{name}: {e}")),
            Ok((rep, _)) => match check(rep, "transport vs finite differences") {
                Some(k) if k.passed && k.samples >= 1_000 && k.threshold == 1e-4 => worst = worst.max(k.measured),
                Some(k) => bad.push(format!("{name}: measured {:e} over {} points", k.measured, k.samples)),
                None => bad.push(format!("{name}: missing transport check")),
            },
        }
    }
    let mut sphere = f64::NAN;
    match sphere_closed_form() {
        Ok(e) if e <= 1e-8 => sphere = e,
        Ok(e) => bad.push(format!("sphere closed form error {e:e} > 1e-8")),
        Err(e) => bad.push(format!("sphere closed form: {e}")),
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("7 catalog surfaces x 1e3 points, worst relative {worst:.2e}; sphere 1/(R-t) error {sphere:.2e}") } else { bad.join("; ") })
}

fn criterion_3(reports: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    let mut worst = f64::INFINITY;
    for (name, r) in reports {
        match r {
            Err(e) => bad.push(format!("{name}: {e}")),
            Ok((rep, _)) => match check(rep, "curvature bounds") {
                Some(k) if k.passed && k.failures == 0 && k.measured >= 0.0 => worst = worst.min(k.measured),
                Some(k) => bad.push(format!("{name}: margin {:e}, {} violations", k.measured, k.failures)),
                None => bad.push(format!("{name}: missing bounds check")),
            },
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("7 catalog surfaces at eps = reach estimate, min margin {worst:.3e}") } else { bad.join("; ") })
}

fn verify_config(surface: &str, grid: usize, seed: u64) -> String {
    format!(
        "analysis = \"verify\"\nseed = {seed}\n[surface]\n{}\n[barrier]\nm = 2\n[sampling]\ngrid = {grid}\nfd = 1000\nlevels = 10\n",
        surface_toml(surface)
    )
}

const BARRIER_DOMAINS: [(&str, usize); 3] = [("sphere", 28), ("slab", 22), ("catenoid", 34)];

fn verify_reports() -> Vec<Run> {
    BARRIER_DOMAINS.iter().enumerate().map(|(i, &(s, g))| (s, run(&verify_config(s, g, 200 + i as u64)))).collect()
}

fn criterion_4(reports: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    let mut total = Duration::ZERO;
    let mut samples = Vec::new();
    let want = [
        ("m-psh margin", 1e-8),
        ("vanishing on boundary", 1e-8),
        ("gradient nonvanishing", f64::NAN),
        ("level sets", 1e-6),
    ];
    for (name, r) in reports {
        match r {
            Err(e) => bad.push(format!("{name}: {e}")),
            Ok((rep, t)) => {
                total += *t;
                for (c, thr) in want {
                    match check(rep, c) {
                        Some(k) if k.passed && (thr.is_nan() || k.threshold.abs() == thr) => {}
                        Some(k) => bad.push(format!("{name}: {c} measured {:e}", k.measured)),
                        None => bad.push(format!("{name}: missing {c}")),
                    }
                }
                let grid = check(rep, "m-psh margin").map_or(0, |k| k.samples);
                if grid < 10_000 {
                    bad.push(format!("{name}: only {grid} grid samples"));
                }
                let levels = check(rep, "level sets").map_or(0, |k| k.samples);
                if levels < 10 {
                    bad.push(format!("{name}: {levels} level samples"));
                }
                samples.push(format!("{name} {grid}"));
            }
        }
    }
    if total > Duration::from_secs(300) {
        bad.push(format!("{:.1}s > 300s", total.as_secs_f64()));
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("m=2 grid samples [{}], {:.1}s total", samples.join(", "), total.as_secs_f64()) } else { bad.join("; ") })
}

fn criterion_5(reports: &[Run]) -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0_f64;
    for (name, r) in reports {
        match r {
            Err(e) => bad.push(format!("{name}: {e}")),
            Ok((rep, _)) => {
                for c in ["eigenvalue list vs finite differences", "eigenvalue list"] {
                    match check(rep, c) {
                        Some(k) if k.passed && (c == "eigenvalue list" || (k.samples >= 1_000 && k.threshold == 1e-6)) => {
                            if c != "eigenvalue list" {
                                worst = worst.max(k.measured)
                            }
                        }
                        Some(k) => bad.push(format!("{name}: {c} measured {:e} over {}", k.measured, k.samples)),
                        None => bad.push(format!("{name}: missing {c}")),
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("3 domains x 1e3 inner-collar samples, worst {worst:.2e}") } else { bad.join("; ") })
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    let mut maps = 0.0;
    for (i, s) in ["sphere", "slab", "catenoid"].iter().enumerate() {
        let text = format!(
            "analysis = \"subharmonicity\"\nseed = {}\n[surface]\n{}\n[barrier]\nm = 2\n[subharmonicity]\naffine = 12\ncopies = 3\nequality_case = true\n",
            300 + i,
            surface_toml(s)
        );
        match run(&text) {
            Err(e) => bad.push(format!("{s}: {e}")),
            Ok((rep, _)) => {
                let m = metric(&rep, "maps").unwrap_or(0.0);
                maps += m;
                if m < 20.0 {
                    bad.push(format!("{s}: {m} maps"));
                }
                let tol = rep.checks.iter().filter(|c| c.name.starts_with("subharmonic:")).all(|c| c.threshold == -1e-8);
                if !tol {
                    bad.push(format!("{s}: tolerance not 1e-8"));
                }
                if check(&rep, "negative control flagged").is_none_or(|c| !c.passed) {
                    bad.push(format!("{s}: negative control not flagged"));
                }
                bad.extend(failed(&rep).into_iter().map(|f| format!("{s}: {f}")));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{maps} maps over ball, slab, catenoid; negative control flagged") } else { bad.join("; ") })
}

fn criterion_7() -> Outcome {
    let text = "analysis = \"metric\"\nseed = 400\n[surface]\ntype = \"sphere\"\nn = 3\nradius = 1.0\n[metric]\npairs = 100\nmax_norm = 0.9\n";
    match run(text) {
        Err(e) => outcome(false, e),
        Ok((rep, t)) => {
            let gap = check(&rep, "bck relative gap");
            let below = check(&rep, "bound not below bck");
            let mut bad = failed(&rep);
            match (gap, below) {
                (Some(g), Some(b)) if g.samples == 100 && g.threshold == 0.01 && b.threshold == 1e-6 => {}
                _ => bad.push("missing or mis-configured bck checks".into()),
            }
            if t > Duration::from_secs(120) {
                bad.push(format!("{:.1}s > 120s", t.as_secs_f64()));
            }
            let detail = match (gap, below) {
                (Some(g), Some(b)) => format!("100 pairs, max relative gap {:.2e}, max shortfall {:.2e}, {:.1}s", g.measured, b.measured, t.as_secs_f64()),
                _ => String::new(),
            };
            outcome(bad.is_empty(), if bad.is_empty() { detail } else { bad.join("; ") })
        }
    }
}

fn criterion_8() -> Outcome {
    let slices = [
        "type = \"punctured-plane\"\npoints = [[0.5, 1.0], [0.5, -1.0]]",
        "type = \"disc\"\ncenter = [0.0, 0.0]\nradius = 2.0",
    ];
    let mut bad = Vec::new();
    let mut finals = Vec::new();
    for s in slices {
        let text = format!(
            "analysis = \"omega-d\"\n[omega_d]\np = [0.0, 0.0, 0.0]\nq = [1.0, 0.0, 0.0]\nks = [10, 100, 1000, 10000]\n[omega_d.slice]\n{s}\n"
        );
        match run(&text) {
            Err(e) => bad.push(e),
            Ok((rep, _)) => {
                bad.extend(failed(&rep));
                match check(&rep, "chain below threshold at largest k") {
                    Some(c) if c.threshold == 0.01 => finals.push(format!("{:.2e}", c.measured)),
                    _ => bad.push("missing threshold check".into()),
                }
                if check(&rep, "chain nonincreasing in k").is_none() {
                    bad.push("missing monotonicity check".into());
                }
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("nonincreasing over k=10..1e4, final bounds [{}]", finals.join(", ")) } else { bad.join("; ") })
}

const CONVEX_CONFIG: &str = r#"
analysis = "convex-classify"
seed = 500
[convex]
dim = 3
trials = 10000
exit_radius = 1e6

[[convex.fixtures]]
name = "slab"
functionals = [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]]
constants = [1.0, 1.0]
interior = [0.0, 0.0, 0.0]
contains_plane = true

[[convex.fixtures]]
name = "wedge"
functionals = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]
constants = [0.0, 0.0]
interior = [-1.0, -1.0, 0.0]
contains_plane = false

[[convex.fixtures]]
name = "halfspace"
functionals = [[1.0, 2.0, -1.0]]
constants = [3.0]
interior = [0.0, 0.0, 0.0]
contains_plane = true

[[convex.fixtures]]
name = "tilted slab pair"
functionals = [[1.0, 1.0, 0.0], [-2.0, -2.0, 0.0], [1.0, 1.0, 0.0]]
constants = [1.0, 4.0, 2.0]
interior = [0.0, 0.0, 5.0]
contains_plane = true

[[convex.fixtures]]
name = "octant"
functionals = [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]]
constants = [0.0, 0.0, 0.0]
interior = [1.0, 1.0, 1.0]
contains_plane = false
"#;

fn criterion_9() -> Outcome {
    match run(CONVEX_CONFIG) {
        Err(e) => outcome(false, e),
        Ok((rep, _)) => {
            let mut bad = failed(&rep);
            let wedge = check(&rep, "wedge: classifier agrees with trials");
            match wedge {
                Some(c) if c.samples == 10_000 && c.failures == 0 => {}
                _ => bad.push("wedge did not run 1e4 exiting trials".into()),
            }
            if metric(&rep, "wedge: rank").is_none_or(|r| r <= 1.0) {
                bad.push("wedge rank certificate not > n-2".into());
            }
            let n = rep.checks.iter().filter(|c| c.name.ends_with("expected classification")).count();
            outcome(bad.is_empty(), if bad.is_empty() { format!("{n} fixtures classified; wedge rank 2 with 1e4 exiting trials") } else { bad.join("; ") })
        }
    }
}

/// Every analysis kind through the full command path, twice, compared byte
/// for byte in both output formats and with different worker counts.
fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let configs = [
        ("curvature", format!("analysis = \"curvature\"\nseed = 9\n[surface]\n{}\n[barrier]\nm = 2\n", surface_toml("catenoid"))),
        ("reach", reach_config("cylinder", 1_000, 100, 9)),
        ("barrier", format!("analysis = \"barrier\"\nseed = 9\n[surface]\n{}\n[barrier]\nm = 2\n[sampling]\ngrid = 12\n", surface_toml("sphere"))),
        ("verify", verify_config("slab", 8, 9).replace("fd = 1000", "fd = 100")),
        ("subharmonicity", format!("analysis = \"subharmonicity\"\nseed = 9\n[surface]\n{}\n[barrier]\nm = 2\n[subharmonicity]\naffine = 4\n", surface_toml("sphere"))),
        ("metric", "analysis = \"metric\"\nseed = 9\n[surface]\ntype = \"sphere\"\nn = 3\nradius = 1.0\n[metric]\npairs = 6\n".to_string()),
        ("omega-d", "analysis = \"omega-d\"\n[omega_d]\np = [0.0, 0.0, 0.0]\nq = [1.0, 0.0, 0.0]\n[omega_d.slice]\ntype = \"disc\"\ncenter = [0.0, 0.0]\nradius = 2.0\n".to_string()),
        ("convex-classify", CONVEX_CONFIG.replace("trials = 10000", "trials = 500")),
    ];
    let mut bad = Vec::new();
    let mut bytes = 0;
    for (name, text) in &configs {
        let path = dir.path().join(format!("{name}.toml"));
        std::fs::write(&path, text).expect("write config");
        for format in [Format::JsonLines, Format::CsvSummary] {
            let outs: Vec<Vec<u8>> = [Some(1), None, Some(3)]
                .into_iter()
                .enumerate()
                .map(|(i, workers)| {
                    let out = dir.path().join(format!("{name}-{format:?}-{i}.out"));
                    let o = execute(&Invocation {
                        analysis: None,
                        config: Some(path.clone()),
                        out: Some(out.clone()),
                        format,
                        workers,
                        ..Default::default()
                    });
                    if o.code != 0 {
                        bad.push(format!("{name}: exit {} {}", o.code, o.stderr.trim()));
                    }
                    std::fs::read(&out).unwrap_or_default()
                })
                .collect();
            if outs[0].is_empty() || outs.iter().any(|o| o != &outs[0]) {
                bad.push(format!("{name} {format:?}: reports differ"));
            }
            bytes += outs[0].len();
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("8 analyses x 2 formats x 3 runs identical ({bytes} bytes per run set)") } else { bad.join("; ") })
}

fn main() {
    let started = Instant::now();
    let reach = reach_reports();
    let verify = verify_reports();
    let results = [
        ("distance-field fidelity", criterion_1(&reach)),
        ("curvature transport", criterion_2(&reach)),
        ("curvature bounds at the reach", criterion_3(&reach)),
        ("barrier construction", criterion_4(&verify)),
        ("eigenvalue-list identity", criterion_5(&verify)),
        ("subharmonicity along conformal harmonic maps", criterion_6()),
        ("BCK reproduction on the ball", criterion_7()),
        ("Omega_D degeneration", criterion_8()),
        ("convex classifier", criterion_9()),
        ("determinism", criterion_10()),
    ];
    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        all &= o.passed;
        println!("criterion {:>2} {:<46} {}  {}", i + 1, name, if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} in {:.1}s", if all { "all criteria pass" } else { "FAILURES" }, started.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}
