//! Analysis pipelines. Every random draw comes from one ChaCha stream seeded
//! by `config.seed`, consumed on the orchestrating thread; parallel work only
//! maps over precomputed inputs, so reports do not depend on the worker count.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mconvex::barrier::{build_barrier, fd_eigen_check, verify_barrier, BarrierFunction, BarrierOptions, VerifySpec};
use mconvex::discs::{
    subharmonicity_sweep, AffineDisc, ConformalMap, ParamDomain, Similarity, SweepGrid, WeierstrassEntry,
    WeierstrassMap,
};
use mconvex::hyperbolicity::{
    bck_metric, convex_contains_2plane, metric_upper_bound, omega_d_distance_chain, random_plane_trials,
    third_coordinate_check, DiscSearchSpec, HalfspaceIntersection, OmegaD,
};
use mconvex::mpsh::{grid_verdict, random_plane, ClosureField};
use mconvex::numkit::{gradient_fd, hessian_fd, sym_eigen, FnField, VecN};
use mconvex::surfaces::{principal_curvatures, CatalogEntry, ImplicitDomain, SurfaceKind};
use mconvex::tubular::{
    collar_samples, curvature_bounds_check, distance_jet, reach_estimate, signed_distance, ReachSettings,
};
use mconvex::Exec;

use crate::config::{require, AnalysisConfig, AnalysisKind, ConfigError, SliceConfig, SurfaceConfig};
use crate::report::{CheckRecord, Report};

/// A library failure tagged with the pipeline stage that hit it.
#[derive(Debug, thiserror::Error)]
#[error("{stage}: {source}")]
pub struct PipelineError {
    pub stage: &'static str,
    #[source]
    pub source: mconvex::Error,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> Result<T, PipelineError>;
}

impl<T> Stage<T> for mconvex::Result<T> {
    fn stage(self, stage: &'static str) -> Result<T, PipelineError> {
        self.map_err(|source| PipelineError { stage, source })
    }
}

type PResult<T> = Result<T, PipelineError>;

/// Runs the analysis `kind`, or the one named in the config.
pub fn run(cfg: &AnalysisConfig, kind: Option<AnalysisKind>, exec: Exec) -> Result<Report, RunError> {
    let kind = match (kind, cfg.analysis) {
        (Some(k), _) | (None, Some(k)) => k,
        (None, None) => return Err(ConfigError::schema("analysis", "no analysis given on the command line or in the config").into()),
    };
    require(cfg, kind)?;
    let mut report = Report::new(kind.as_str(), cfg);
    report.config.analysis = Some(kind);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match kind {
        AnalysisKind::Curvature => curvature(cfg, &mut rng, exec, &mut report)?,
        AnalysisKind::Reach => reach(cfg, &mut rng, exec, &mut report)?,
        AnalysisKind::Barrier => barrier(cfg, &mut rng, exec, &mut report)?,
        AnalysisKind::Verify => verify(cfg, &mut rng, exec, &mut report)?,
        AnalysisKind::Subharmonicity => subharmonicity(cfg, &mut rng, exec, &mut report)?,
        AnalysisKind::Metric => metric(cfg, &mut rng, exec, &mut report)?,
        AnalysisKind::OmegaD => omega_d(cfg, &mut rng, &mut report)?,
        AnalysisKind::ConvexClassify => convex(cfg, &mut rng, &mut report)?,
    }
    Ok(report)
}

fn surface(cfg: &AnalysisConfig) -> PResult<(SurfaceConfig, CatalogEntry)> {
    let s = cfg.surface.expect("checked by require");
    Ok((s, s.entry().stage("surface")?))
}

/// Axis-aligned box containing the sampled part of the domain.
fn bounding_box(e: &CatalogEntry) -> (Vec<f64>, Vec<f64>) {
    let n = e.dim();
    let l = e.extent;
    let cube = |a: f64| (vec![-a; n], vec![a; n]);
    match e.kind {
        SurfaceKind::Sphere { radius, .. } => cube(radius),
        SurfaceKind::Plane { .. } => {
            let (lo, mut hi) = cube(l);
            hi[n - 1] = 0.0;
            (lo, hi)
        }
        SurfaceKind::Slab { half_width, .. } => {
            let (mut lo, mut hi) = cube(l);
            lo[n - 1] = -half_width;
            hi[n - 1] = half_width;
            (lo, hi)
        }
        SurfaceKind::Cylinder { radius, .. } => {
            let (mut lo, mut hi) = cube(l);
            for i in 0..2 {
                lo[i] = -radius;
                hi[i] = radius;
            }
            (lo, hi)
        }
        SurfaceKind::Catenoid { scale } => {
            let r = scale * (l / scale).cosh();
            (vec![-r, -r, -l], vec![r, r, l])
        }
        _ => cube(l),
    }
}

/// Cell-centred lattice over the bounding box, restricted to `φ < 0`.
fn interior_grid(e: &CatalogEntry, d: &ImplicitDomain, per_axis: usize) -> Vec<VecN> {
    let (lo, hi) = bounding_box(e);
    let n = lo.len();
    let total = per_axis.pow(n as u32);
    let mut out = Vec::new();
    for k in 0..total {
        let mut r = k;
        let x = VecN::from_fn(n, |i| {
            let j = r % per_axis;
            r /= per_axis;
            lo[i] + (hi[i] - lo[i]) * (j as f64 + 0.5) / per_axis as f64
        });
        if d.phi(&x) < 0.0 {
            out.push(x);
        }
    }
    out
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn curvature(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, exec: Exec, r: &mut Report) -> PResult<()> {
    let (_, e) = surface(cfg)?;
    let d = e.domain().stage("surface")?;
    let pts = e.boundary_samples(cfg.sampling.boundary, rng);
    let sps = exec.try_map(&pts, |p| principal_curvatures(d, p)).stage("principal curvatures")?;
    let tol = cfg.tolerances.curvature;

    let mut worst = (0.0_f64, None);
    let mut fails = 0;
    let mut have_closed_form = false;
    for sp in &sps {
        if let Some(want) = e.analytic_curvatures(&sp.position) {
            have_closed_form = true;
            let err = sp.curvatures.iter().zip(&want).map(|(a, b)| (a - b).abs() / (1.0 + b.abs())).fold(0.0, f64::max);
            fails += usize::from(err > tol);
            if err >= worst.0 {
                worst = (err, Some(sp.position));
            }
        }
    }
    if have_closed_form {
        let mut c = CheckRecord::new("closed-form curvatures", fails == 0, worst.0, tol).counts(sps.len(), fails);
        if let Some(p) = worst.1 {
            c = c.at(&p);
        }
        r.check(c);
    }
    if e.kind.is_minimal() && e.dim() == 3 {
        let h: Vec<f64> = sps.iter().map(|s| s.curvatures[0] + s.curvatures[1]).collect();
        let fails = h.iter().filter(|x| x.abs() > tol).count();
        let i = argmax_abs(&h);
        r.check(CheckRecord::new("mean curvature vanishes", fails == 0, h[i].abs(), tol).counts(h.len(), fails).at(&sps[i].position));
    }
    if let Some(b) = cfg.barrier {
        let defects: Vec<f64> = sps.iter().map(|s| s.curvatures.iter().take(b.m).sum::<f64>()).collect();
        let kmax = sps.iter().map(|s| max_abs(&s.curvatures)).fold(0.0, f64::max);
        let thr = -1e-9 * (1.0 + kmax);
        let fails = defects.iter().filter(|x| **x < thr).count();
        let i = argmin(&defects);
        r.check(
            CheckRecord::new(format!("{}-convexity", b.m), fails == 0, defects[i], thr)
                .counts(defects.len(), fails)
                .at(&sps[i].position),
        );
    }
    let all: Vec<f64> = sps.iter().flat_map(|s| s.curvatures.iter().copied()).collect();
    r.metric("min_curvature", all.iter().copied().fold(f64::INFINITY, f64::min));
    r.metric("max_curvature", all.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    Ok(())
}

fn argmax_abs(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i].abs() > v[b].abs() { i } else { b })
}

fn argmin(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] < v[b] { i } else { b })
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
}

/// Distance-field fidelity, curvature transport, reach and curvature bounds.
fn reach(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, exec: Exec, r: &mut Report) -> PResult<()> {
    let (_, e) = surface(cfg)?;
    let d = e.domain().stage("surface")?;
    let n = e.dim();
    let boundary = e.boundary_samples(cfg.sampling.boundary, rng);
    let est = reach_estimate(d, &boundary, &ReachSettings::default(), exec).stage("reach estimate")?;
    r.metric("reach", est.value);
    r.metric("focal_bound", est.focal_bound);
    r.metric("probe_bound", est.probe_bound);
    if let Some(known) = e.known_reach().filter(|k| k.is_finite()) {
        let rel = (est.value - known).abs() / known;
        let mut c = CheckRecord::new("reach vs closed form", rel <= 1e-3, rel, 1e-3).note(est.qualifier);
        if let Some(w) = &est.witness {
            c = c.at(w);
        }
        r.check(c);
    }

    let m = cfg.barrier.map_or(n - 1, |b| b.m);
    let eps = if est.value.is_finite() { est.value } else { e.extent };
    let bounds = curvature_bounds_check(d, eps, m, &boundary, exec).stage("curvature bounds")?;
    let worst = bounds.worst_upper_margin.min(bounds.worst_lower_margin).min(bounds.worst_negative_part_margin);
    let mut c = CheckRecord::new("curvature bounds", bounds.passed(), worst, -1e-12 / eps)
        .counts(bounds.samples, bounds.violations.len())
        .note(bounds.qualifier);
    if let Some(v) = bounds.violations.first() {
        c = c.at(&v.point);
    }
    r.check(c);

    // distance field on the collar
    let depth = 0.9 * eps.min(e.extent);
    let bd = e.boundary_samples(cfg.sampling.collar, rng);
    let samples = collar_samples(d, &bd, (0.0, depth), rng).stage("collar samples")?;
    let jets = exec.try_map(&samples, |s| distance_jet(d, &s.point)).stage("distance jet")?;
    let unit: Vec<f64> = jets.iter().map(|j| (j.gradient.norm() - 1.0).abs()).collect();
    let kill: Vec<f64> = jets.iter().map(|j| j.hessian.mul_vec(&j.gradient).norm()).collect();
    let dev: Vec<f64> = jets.iter().zip(&samples).map(|(j, s)| (j.delta() - s.delta).abs()).collect();
    let tol = cfg.tolerances.unit_gradient;
    for (name, v, t) in [
        ("unit gradient", &unit, tol),
        ("hessian annihilates gradient", &kill, tol),
        ("signed distance at known depth", &dev, 1e-8 * d.scale()),
    ] {
        let fails = v.iter().filter(|x| **x > t).count();
        let i = argmax(v);
        r.check(CheckRecord::new(name, fails == 0, v[i], t).counts(v.len(), fails).at(&samples[i].point));
    }

    // transported curvatures against finite differences of δ
    let fd_pts: Vec<VecN> = samples.iter().take(cfg.sampling.fd).map(|s| s.point).collect();
    let step = 1e-3 * d.scale();
    let errs = exec
        .try_map(&fd_pts, |x| {
            let jet = distance_jet(d, x)?;
            let field = FnField::new(n, |y: &VecN| signed_distance(d, y).map(|p| p.delta).unwrap_or(f64::NAN));
            let h = hessian_fd(&field, x, step)?;
            let g = gradient_fd(&field, x, step)?;
            let fd = sym_eigen(&h)?.values;
            let an = sym_eigen(&jet.hessian)?.values;
            let scale = 1.0 + max_abs(&an);
            let e1 = fd.iter().zip(&an).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
            Ok(e1.max((g - jet.gradient).norm()))
        })
        .stage("finite-difference distance jet")?;
    if !errs.is_empty() {
        let fails = errs.iter().filter(|x| **x > 1e-4).count();
        let i = argmax(&errs);
        r.check(CheckRecord::new("transport vs finite differences", fails == 0, errs[i], 1e-4).counts(errs.len(), fails).at(&fd_pts[i]));
    }
    Ok(())
}

fn build(cfg: &AnalysisConfig, e: &CatalogEntry, rng: &mut ChaCha8Rng, exec: Exec) -> PResult<(BarrierFunction, Vec<VecN>)> {
    let b = cfg.barrier.expect("checked by require");
    let d = e.domain().stage("surface")?;
    let boundary = e.boundary_samples(cfg.sampling.boundary, rng);
    let reach = match b.reach.or(e.known_reach()) {
        Some(x) => x,
        None => reach_estimate(d, &boundary, &ReachSettings::default(), exec).stage("reach estimate")?.value,
    };
    let eps = b.eps.unwrap_or(if reach.is_finite() { reach } else { e.extent });
    let opts = BarrierOptions {
        alpha: b.alpha,
        safety: b.safety,
        cap_degree: b.cap_degree,
        reach: Some(reach),
        boundary: boundary.clone(),
        exec,
        ..Default::default()
    };
    let bf = build_barrier(d, b.m, eps, &opts).stage("build barrier")?;
    Ok((bf, boundary))
}

fn barrier_metrics(bf: &BarrierFunction, r: &mut Report) {
    let c = bf.collar();
    r.metric("alpha", bf.profile().alpha());
    r.metric("eps", bf.profile().eps());
    r.metric("eps0_prime", c.eps0_prime);
    r.metric("eps0", c.eps0);
    r.metric("eps2", c.eps2);
    r.metric("eps1", c.eps1);
    r.metric("scale_c", bf.scale());
    r.metric("plateau_value", bf.plateau_value());
}

fn barrier(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, exec: Exec, r: &mut Report) -> PResult<()> {
    let (_, e) = surface(cfg)?;
    let (bf, _) = build(cfg, &e, rng, exec)?;
    barrier_metrics(&bf, r);
    let pts = interior_grid(&e, bf.domain(), cfg.sampling.grid);
    let g = grid_verdict(&bf, &pts, bf.m(), Some(cfg.tolerances.psh), exec).stage("grid verdict")?;
    let mut c = CheckRecord::new("m-psh grid", g.violated == 0, g.worst_margin, -cfg.tolerances.psh).counts(g.samples, g.violated);
    if let Some(p) = g.violations.first().map(|v| &v.0).or(g.worst_point.as_ref()) {
        c = c.at(p);
    }
    r.check(c);
    r.metric("strict_samples", g.strict as f64);
    r.metric("psh_samples", g.psh as f64);
    Ok(())
}

fn verify(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, exec: Exec, r: &mut Report) -> PResult<()> {
    let (_, e) = surface(cfg)?;
    let (bf, boundary) = build(cfg, &e, rng, exec)?;
    barrier_metrics(&bf, r);
    let t = &cfg.tolerances;
    let pts = interior_grid(&e, bf.domain(), cfg.sampling.grid);
    let mut spec = VerifySpec::new(pts, boundary.clone());
    spec.levels = cfg.sampling.levels;
    spec.level_points = cfg.sampling.level_points;
    spec.tol = t.psh;
    spec.zero_tol = t.zero;
    spec.grad_floor = t.grad_floor;
    spec.eigen_tol = t.eigen;
    spec.level_tol = t.level;
    spec.exec = exec;
    let rep = verify_barrier(&bf, &spec).stage("verify barrier")?;
    for c in &rep.checks {
        r.check(CheckRecord::from_summary(c));
    }
    r.metric("level_std_max", rep.level_std_max);
    r.metric("strict_samples", rep.grid.strict as f64);

    // inner collar only: χ is C² but not C³ at h(-ε₁)
    let h = t.fd_step;
    let eps1 = bf.collar().eps1;
    if eps1 > 6.0 * h {
        let bd: Vec<VecN> = (0..cfg.sampling.fd).map(|i| boundary[i % boundary.len()]).collect();
        let s = collar_samples(bf.domain(), &bd, (3.0 * h, eps1 - 3.0 * h), rng).stage("collar samples")?;
        let pts: Vec<VecN> = s.iter().map(|c| c.point).collect();
        let fd = fd_eigen_check(&bf, &pts, h, t.fd_eigen, exec).stage("finite-difference spectrum")?;
        r.check(CheckRecord::from_summary(&fd));
    }
    Ok(())
}

/// Similarity placing `inner` inside the ball of radius `radius` about `center`.
fn place(inner: Arc<dyn ConformalMap>, center: VecN, radius: f64, rng: &mut ChaCha8Rng) -> PResult<Similarity> {
    let n = inner.dim();
    let pts = inner.domain().lattice(32, 64);
    let vals: Vec<VecN> = pts.iter().map(|z| inner.jet(*z).map(|j| j.value)).collect::<mconvex::Result<_>>().stage("patch placement")?;
    let mut mid = VecN::zeros(n);
    for v in &vals {
        mid += *v;
    }
    mid = mid * (1.0 / vals.len() as f64);
    let spread = vals.iter().map(|v| v.dist(&mid)).fold(0.0, f64::max) * 1.05;
    let s = radius / spread;
    let rows = random_plane(n, n, rng).basis().to_vec();
    let rot = VecN::from_fn(n, |i| rows[i].dot(&mid));
    Similarity::new(inner, s, rows, center - rot * s).stage("patch placement")
}

fn patch(name: &str) -> Option<WeierstrassMap> {
    match name {
        "catenoid" => Some(WeierstrassMap::new(
            WeierstrassEntry::catenoid(),
            ParamDomain::Annulus { inner: (-1.2f64).exp(), outer: 1.2f64.exp() },
        )),
        "helicoid" => Some(WeierstrassMap::new(
            WeierstrassEntry::helicoid(),
            ParamDomain::Disc { center: [1.0, 0.0], radius: 0.6 },
        )),
        "enneper" => Some(WeierstrassMap::new(
            WeierstrassEntry::enneper(),
            ParamDomain::Disc { center: [0.0, 0.0], radius: 0.9 },
        )),
        _ => None,
    }
}

fn subharmonicity(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, exec: Exec, r: &mut Report) -> PResult<()> {
    let (_, e) = surface(cfg)?;
    let (bf, _) = build(cfg, &e, rng, exec)?;
    let sc = cfg.subharmonicity.clone().unwrap_or_else(|| {
        crate::config::parse("[subharmonicity]", &Default::default())
            .ok()
            .and_then(|c| c.subharmonicity)
            .expect("defaults parse")
    });
    let d = bf.domain().clone();
    let n = e.dim();
    let eps2 = bf.collar().eps2;
    let grid = SweepGrid { n1: sc.grid[0], n2: sc.grid[1] };
    let tol = cfg.tolerances.subharmonic;

    // a point at depth `depth` below a random boundary point
    let inner_point = |rng: &mut ChaCha8Rng, depth: f64| -> PResult<VecN> {
        let p = e.boundary_samples(1, rng)[0];
        Ok(p + d.inner_normal(&p).stage("inner normal")? * depth)
    };

    let mut maps: Vec<(String, Arc<dyn ConformalMap>)> = Vec::new();
    for i in 0..sc.affine {
        let depth = eps2 * rng.random_range(0.1..0.9);
        let c = inner_point(rng, depth)?;
        let plane = random_plane(n, 2, rng);
        let b = plane.basis();
        let rad = 0.9 * depth;
        maps.push((format!("affine disc {i}"), Arc::new(AffineDisc::new(c, b[0] * rad, b[1] * rad, 1.0))));
    }
    if n == 3 {
        for name in &sc.patches {
            let base = patch(name).ok_or_else(|| PipelineError {
                stage: "patches",
                source: mconvex::Error::InvalidParameter { name: "patches", reason: format!("unknown patch `{name}`") },
            })?;
            let base: Arc<dyn ConformalMap> = Arc::new(base);
            for k in 0..sc.copies {
                let depth = eps2 * rng.random_range(0.3..0.9);
                let c = inner_point(rng, depth)?;
                let m = place(base.clone(), c, 0.9 * depth, rng)?;
                maps.push((format!("{name} patch {k}"), Arc::new(m)));
            }
        }
    }

    let mut first_disc = None;
    for (name, f) in &maps {
        let s = subharmonicity_sweep(&bf, f.as_ref(), grid, tol, exec).stage("subharmonicity sweep")?;
        let mut c = CheckRecord::new(format!("subharmonic: {name}"), s.passed(), s.min_laplacian, -tol).counts(s.samples, s.violation_count);
        if let Some(z) = s.violations.first().map(|v| v.0).or(s.min_at) {
            c = c.at(&f.jet(z).stage("map jet")?.value);
        }
        r.check(c);
        if first_disc.is_none() {
            first_disc = Some(f.clone());
        }
    }

    if sc.equality_case && matches!(e.kind, SurfaceKind::Slab { .. } | SurfaceKind::Plane { .. }) {
        let depth = 0.5 * bf.collar().eps1;
        let mut c = VecN::zeros(n);
        c[n - 1] = match e.kind {
            SurfaceKind::Slab { half_width, .. } => half_width - depth,
            _ => -depth,
        };
        let f = AffineDisc::new(c, VecN::basis(n, 0), VecN::basis(n, 1), 0.5 * e.extent);
        let s = subharmonicity_sweep(&bf, &f, grid, tol, exec).stage("equality case")?;
        let worst = s.min_laplacian.abs().max(s.rho_range.1 - s.rho_range.0);
        r.check(
            CheckRecord::new("equality case: disc in a level set", s.passed() && worst <= tol, worst, tol)
                .counts(s.samples, s.violation_count)
                .note("laplacian and range of rho on the disc both vanish"),
        );
    }

    if sc.negative_control {
        if let Some(f) = first_disc {
            let neg = ClosureField::scaled_norm_sq(n, -1.0);
            let s = subharmonicity_sweep(&neg, f.as_ref(), grid, tol, exec).stage("negative control")?;
            r.check(
                CheckRecord::new("negative control flagged", s.violation_count > 0, s.min_laplacian, -tol)
                    .counts(s.samples, s.samples - s.violation_count)
                    .note("rho = -|x|^2 must be reported as non-subharmonic"),
            );
        }
    }
    r.metric("maps", maps.len() as f64);
    Ok(())
}

fn metric(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, exec: Exec, r: &mut Report) -> PResult<()> {
    let (_, e) = surface(cfg)?;
    let d = e.domain().stage("surface")?;
    let n = e.dim();
    let mc = cfg.metric.clone().unwrap_or(crate::config::MetricConfig { pairs: 100, max_norm: 0.9, points: Vec::new() });
    let mut pairs: Vec<(VecN, VecN)> = Vec::new();
    let reach_r = mc.max_norm * d.scale();
    let mut tries = 0;
    while pairs.len() < mc.pairs && tries < 1000 * mc.pairs.max(1) {
        tries += 1;
        let p = VecN::from_fn(n, |_| rng.random_range(-reach_r..reach_r));
        if p.norm() > reach_r || d.phi(&p) >= 0.0 {
            continue;
        }
        let dir = VecN::from_fn(n, |_| rng.random_range(-1.0..1.0));
        if dir.norm() < 1e-3 {
            continue;
        }
        pairs.push((p, dir));
    }
    for q in &mc.points {
        let p = VecN::try_from_slice(&q.p).stage("metric points")?;
        let v = VecN::try_from_slice(&q.v).stage("metric points")?;
        pairs.push((p, v));
    }
    let seed = cfg.seed;
    let idx: Vec<usize> = (0..pairs.len()).collect();
    let ests = exec
        .try_map(&idx, |&i| {
            let spec = DiscSearchSpec { seed: seed.wrapping_add(i as u64), exec: Exec::Sequential, ..Default::default() };
            metric_upper_bound(d, &pairs[i].0, &pairs[i].1, &spec)
        })
        .stage("metric upper bound")?;
    let bounds: Vec<f64> = ests.iter().map(|x| x.bound).collect();
    let infinite = bounds.iter().filter(|b| !b.is_finite()).count();
    r.check(CheckRecord::new("admissible disc found", infinite == 0, infinite as f64, 0.0).counts(bounds.len(), infinite).note(ests.first().map_or("", |x| x.label)));

    if let SurfaceKind::Sphere { radius, .. } = e.kind {
        let oracle: Vec<f64> = pairs
            .iter()
            .map(|(p, v)| bck_metric(&(*p * (1.0 / radius)), &(*v * (1.0 / radius))))
            .collect::<mconvex::Result<_>>()
            .stage("bck oracle")?;
        let ratio: Vec<f64> = bounds.iter().zip(&oracle).map(|(b, o)| b / o - 1.0).collect();
        let below: Vec<f64> = bounds.iter().zip(&oracle).map(|(b, o)| o - b).collect();
        let t = &cfg.tolerances;
        let i = argmax(&ratio);
        let fails = ratio.iter().filter(|x| **x > t.bck_relative).count();
        r.check(CheckRecord::new("bck relative gap", fails == 0, ratio[i], t.bck_relative).counts(ratio.len(), fails).at(&pairs[i].0));
        let j = argmax(&below);
        let fails = below.iter().filter(|x| **x > t.bck_below).count();
        r.check(CheckRecord::new("bound not below bck", fails == 0, below[j], t.bck_below).counts(below.len(), fails).at(&pairs[j].0));
    }
    r.metric("pairs", pairs.len() as f64);
    r.metric("min_bound", bounds.iter().copied().fold(f64::INFINITY, f64::min));
    r.metric("max_bound", bounds.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    Ok(())
}

fn omega_d(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, r: &mut Report) -> PResult<()> {
    let oc = cfg.omega_d.clone().expect("checked by require");
    let dom = match &oc.slice {
        SliceConfig::Disc { center, radius } => OmegaD::disc(*center, *radius),
        SliceConfig::PuncturedPlane { points } => OmegaD::punctured_plane(points.clone()),
    };
    let p = VecN::new(&oc.p);
    let q = VecN::new(&oc.q);
    let mut vals = Vec::new();
    for &k in &oc.ks {
        let b = omega_d_distance_chain(&dom, &p, &q, k).stage("distance chain")?;
        r.metric(format!("chain_k{k}"), b.total);
        vals.push(b.total);
    }
    let rises = vals.windows(2).filter(|w| w[1] > w[0]).count();
    let worst_rise = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
    r.check(CheckRecord::new("chain nonincreasing in k", rises == 0, worst_rise, 0.0).counts(vals.len().saturating_sub(1), rises).at_slice(&oc.p));
    if let Some(last) = vals.last() {
        let t = cfg.tolerances.omega_d_final;
        r.check(CheckRecord::new("chain below threshold at largest k", *last < t, *last, t).at_slice(&oc.q));
    }
    let samples: Vec<VecN> = (0..4000)
        .map(|_| VecN::new(&[rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0), rng.random_range(-1.5..1.5)]))
        .collect();
    let tc = third_coordinate_check(&dom, &samples);
    r.check(
        CheckRecord::new("third coordinate bounded on members", tc.bounded, tc.max_abs_z, 1.0)
            .counts(tc.members, usize::from(!tc.bounded))
            .note(tc.derivation),
    );
    Ok(())
}

fn convex(cfg: &AnalysisConfig, rng: &mut ChaCha8Rng, r: &mut Report) -> PResult<()> {
    let cc = cfg.convex.clone().expect("checked by require");
    for f in &cc.fixtures {
        let ls: Vec<VecN> = f.functionals.iter().map(|l| VecN::try_from_slice(l)).collect::<mconvex::Result<_>>().stage("convex fixture")?;
        let h = HalfspaceIntersection::new(cc.dim, ls, f.constants.clone()).stage("convex fixture")?;
        let x0 = VecN::try_from_slice(&f.interior).stage("convex fixture")?;
        let class = convex_contains_2plane(&h, &x0).stage("convex classifier")?;
        let mut sub = ChaCha8Rng::seed_from_u64(rng.random());
        let t = random_plane_trials(&h, &x0, cc.trials, cc.exit_radius, &mut sub).stage("random planes")?;
        r.metric(format!("{}: rank", f.name), class.rank as f64);
        let (ok, measured, note) = if class.contains_plane {
            (t.witness_verified == Some(true), class.rank as f64, "contained plane exhibited from the kernel of the functionals")
        } else {
            (t.exited == t.trials, t.max_exit_radius, "every random plane leaves the intersection")
        };
        let mut c = CheckRecord::new(format!("{}: classifier agrees with trials", f.name), ok, measured, cc.exit_radius)
            .counts(t.trials, t.trials - t.exited.min(t.trials))
            .note(note);
        if class.contains_plane {
            c = c.counts(1, usize::from(!ok));
        }
        r.check(c.at(&x0));
        if let Some(want) = f.contains_plane {
            r.check(
                CheckRecord::new(format!("{}: expected classification", f.name), want == class.contains_plane, class.rank as f64, (cc.dim - 2) as f64)
                    .note(if class.contains_plane { "contains an affine 2-plane" } else { "contains no affine 2-plane" }),
            );
        }
    }
    Ok(())
}
