use super::{BarrierFunction, Region};
use crate::mpsh::{GridReport, Verdict};
use crate::numkit::{hessian_fd, sym_eigen, VecN};
use crate::tubular::signed_distance_with;
use crate::{Error, Exec, Result};

/// Sample sets and tolerances for [`verify_barrier`].
#[derive(Debug, Clone)]
pub struct VerifySpec {
    /// Points of `Ω̄` where the Hessian checks run.
    pub samples: Vec<VecN>,
    /// Boundary points for the vanishing check and as level-set probe bases.
    pub boundary: Vec<VecN>,
    pub levels: usize,
    /// How many boundary points to probe per level.
    pub level_points: usize,
    /// Tolerance of the m-psh verdict.
    pub tol: f64,
    pub zero_tol: f64,
    /// `|∇ρ| ≥ grad_floor · c` on `{-1 < ρ ≤ 0}`.
    pub grad_floor: f64,
    /// Relative tolerance of the closed-form spectrum.
    pub eigen_tol: f64,
    pub level_tol: f64,
    pub exec: Exec,
}

impl VerifySpec {
    pub fn new(samples: Vec<VecN>, boundary: Vec<VecN>) -> Self {
        VerifySpec {
            samples,
            boundary,
            levels: 10,
            level_points: 16,
            tol: 1e-8,
            zero_tol: 1e-8,
            grad_floor: 1e-6,
            eigen_tol: 1e-5,
            level_tol: 1e-6,
            exec: Exec::available(),
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    /// Worst measured value, in the check's own units (see `threshold`).
    pub worst: f64,
    pub threshold: f64,
    pub worst_point: Option<VecN>,
    /// Up to 16 failing points, in sample order.
    pub failed_points: Vec<VecN>,
}

impl CheckSummary {
    fn new(name: &str, threshold: f64) -> Self {
        CheckSummary {
            name: name.to_string(),
            samples: 0,
            failures: 0,
            worst: f64::NAN,
            threshold,
            worst_point: None,
            failed_points: Vec::new(),
        }
    }

    /// Records a measurement; `larger_is_worse` picks the direction.
    fn record(&mut self, x: &VecN, value: f64, failed: bool, larger_is_worse: bool) {
        self.samples += 1;
        let worse = self.worst.is_nan() || if larger_is_worse { value > self.worst } else { value < self.worst };
        if worse {
            self.worst = value;
            self.worst_point = Some(*x);
        }
        if failed {
            self.failures += 1;
            if self.failed_points.len() < 16 {
                self.failed_points.push(*x);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// Checks (a) m-psh, (b) vanishing on `M`, (c) nonvanishing gradient,
    /// (d) closed-form spectrum, (e) level sets, in that order.
    pub checks: Vec<CheckSummary>,
    pub grid: GridReport,
    /// Largest `|δ - h⁻¹(t/c)|` spread within a single level.
    pub level_std_max: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckSummary::passed)
    }
}

struct SampleOutcome {
    margin: f64,
    verdict: Verdict,
    value: f64,
    grad_norm: f64,
    eigen_err: Option<f64>,
}

/// Runs checks (a)-(e) on a built barrier.
pub fn verify_barrier(bf: &BarrierFunction, spec: &VerifySpec) -> Result<VerificationReport> {
    if spec.samples.is_empty() || spec.boundary.is_empty() {
        return Err(Error::EmptySamples);
    }
    let m = bf.m();
    let c = bf.scale();
    let outcomes = spec.exec.try_map(&spec.samples, |x| {
        let jet = bf.evaluate(x).map_err(|e| Error::Evaluation { point: x.to_vec(), reason: e.to_string() })?;
        let eig = sym_eigen(&jet.hessian)?;
        let margin: f64 = eig.values[..m].iter().sum();
        let eigen_err = (jet.region != Region::Outside).then(|| {
            let list = bf.eigenvalue_list(&jet);
            let scale = list.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
            eig.values.iter().zip(&list).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
        });
        Ok(SampleOutcome {
            margin,
            verdict: Verdict::classify(margin, spec.tol),
            value: jet.value,
            grad_norm: jet.gradient.norm(),
            eigen_err,
        })
    })?;

    let mut a = CheckSummary::new("m-psh margin", -spec.tol);
    let mut cc = CheckSummary::new("gradient nonvanishing", spec.grad_floor * c);
    let mut d = CheckSummary::new("eigenvalue list", spec.eigen_tol);
    let mut grid = GridReport {
        m,
        samples: spec.samples.len(),
        strict: 0,
        psh: 0,
        violated: 0,
        worst_margin: f64::INFINITY,
        worst_point: None,
        violations: Vec::new(),
    };
    for (x, o) in spec.samples.iter().zip(&outcomes) {
        a.record(x, o.margin, o.verdict == Verdict::Violated, false);
        match o.verdict {
            Verdict::StrictlyPsh => grid.strict += 1,
            Verdict::Psh => grid.psh += 1,
            Verdict::Violated => {
                grid.violated += 1;
                if grid.violations.len() < GridReport::MAX_LISTED {
                    grid.violations.push((*x, o.margin));
                }
            }
        }
        if o.margin < grid.worst_margin {
            grid.worst_margin = o.margin;
            grid.worst_point = Some(*x);
        }
        if o.value > -1.0 && o.value <= 0.0 {
            cc.record(x, o.grad_norm, o.grad_norm < spec.grad_floor * c, false);
        }
        if let Some(err) = o.eigen_err {
            d.record(x, err, err > spec.eigen_tol, true);
        }
    }

    let mut b = CheckSummary::new("vanishing on boundary", spec.zero_tol);
    let zeros = spec.exec.try_map(&spec.boundary, |p| bf.value_at(p))?;
    for (p, v) in spec.boundary.iter().zip(&zeros) {
        b.record(p, v.abs(), v.abs() > spec.zero_tol, true);
    }

    // the level points lie in {-1 < ρ < 0} by construction, so (c) is never
    // vacuous even when the grid misses the collar
    let (e, level_std_max, level_points) = level_check(bf, spec)?;
    let grads = spec.exec.try_map(&level_points, |x| Ok(bf.evaluate(x)?.gradient.norm()))?;
    for (x, g) in level_points.iter().zip(grads) {
        cc.record(x, g, g < spec.grad_floor * c, false);
    }
    Ok(VerificationReport { checks: vec![a, b, cc, d, e], grid, level_std_max })
}

fn level_check(bf: &BarrierFunction, spec: &VerifySpec) -> Result<(CheckSummary, f64, Vec<VecN>)> {
    let mut e = CheckSummary::new("level sets", spec.level_tol);
    let bases: Vec<VecN> = spec.boundary.iter().take(spec.level_points).copied().collect();
    let eps1 = bf.collar().eps1;
    let mut std_max = 0.0_f64;
    let mut points = Vec::with_capacity(spec.levels * bases.len());
    for k in 0..spec.levels {
        let t = -(k as f64 + 0.5) / spec.levels as f64;
        let want = bf.level_delta(t);
        let found = spec.exec.try_map(&bases, |p| {
            let n = bf.domain().inner_normal(p)?;
            let (mut lo, mut hi) = (0.0, eps1);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if bf.value_at(&(*p + n * mid))? > t {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let x = *p + n * (0.5 * (lo + hi));
            let delta = signed_distance_with(bf.domain(), &x, &bf.collar().projection)?.delta;
            Ok((x, delta))
        })?;
        let mean = found.iter().map(|f| f.1).sum::<f64>() / found.len() as f64;
        let var = found.iter().map(|f| (f.1 - mean).powi(2)).sum::<f64>() / found.len() as f64;
        std_max = std_max.max(var.sqrt());
        for (x, delta) in &found {
            let dev = (delta - want).abs();
            e.record(x, dev, dev > spec.level_tol, true);
            points.push(*x);
        }
    }
    Ok((e, std_max, points))
}

/// Compares the closed-form spectrum with the eigenvalues of a
/// finite-difference Hessian of `ρ`. Errors are relative to
/// `1 + max |eigenvalue|`.
pub fn fd_eigen_check(bf: &BarrierFunction, samples: &[VecN], step: f64, tol: f64, exec: Exec) -> Result<CheckSummary> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let errs = exec.try_map(samples, |x| {
        let jet = bf.evaluate(x)?;
        let list = bf.eigenvalue_list(&jet);
        let fd = sym_eigen(&hessian_fd(bf, x, step)?)?;
        let scale = 1.0 + list.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        Ok(fd.values.iter().zip(&list).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale)
    })?;
    let mut s = CheckSummary::new("eigenvalue list vs finite differences", tol);
    for (x, err) in samples.iter().zip(&errs) {
        s.record(x, *err, *err > tol, true);
    }
    Ok(s)
}
