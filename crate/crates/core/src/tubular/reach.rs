use super::projection::{signed_distance_with, ProjectionSettings};
use super::SAMPLED_REGION_ONLY;
use crate::numkit::VecN;
use crate::surfaces::{principal_curvatures, ImplicitDomain};
use crate::{Error, Exec, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReachSettings {
    /// Probes give up (bound `∞`) beyond this depth, in units of the domain
    /// scale.
    pub max_depth: f64,
    pub march_steps: usize,
    /// Bisection stops when the bracket is shorter than this times the scale.
    pub bisect_tol: f64,
    /// A foot that moves farther than this times the scale counts as a jump to
    /// another sheet.
    pub jump: f64,
    pub projection: ProjectionSettings,
}

impl Default for ReachSettings {
    fn default() -> Self {
        ReachSettings {
            max_depth: 4.0,
            march_steps: 32,
            bisect_tol: 1e-7,
            jump: 1e-3,
            projection: ProjectionSettings::default(),
        }
    }
}

/// Lower-bound estimate of the reach over the sampled boundary region.
#[derive(Debug, Clone, PartialEq)]
pub struct ReachEstimate {
    pub value: f64,
    /// `1 / max |ν|`.
    pub focal_bound: f64,
    /// Smallest depth along a normal where the nearest point stops being the
    /// base point.
    pub probe_bound: f64,
    /// Boundary sample that realised the smaller of the two bounds.
    pub witness: Option<VecN>,
    pub samples: usize,
    pub qualifier: &'static str,
}

/// `min(focal bound, normal-probe bound)` over the boundary samples.
pub fn reach_estimate(
    domain: &ImplicitDomain,
    samples: &[VecN],
    settings: &ReachSettings,
    exec: Exec,
) -> Result<ReachEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let per_sample = exec.try_map(samples, |p| {
        let sp = principal_curvatures(domain, p)?;
        let kmax = sp.curvatures.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let focal = if kmax > 0.0 { 1.0 / kmax } else { f64::INFINITY };
        let inner = probe(domain, p, &sp.inner_normal, settings);
        let outer = probe(domain, p, &sp.outer_normal(), settings);
        Ok((focal, inner.min(outer)))
    })?;
    let mut focal_bound = f64::INFINITY;
    let mut probe_bound = f64::INFINITY;
    let mut witness = None;
    let mut best = f64::INFINITY;
    for (p, (f, q)) in samples.iter().zip(&per_sample) {
        focal_bound = focal_bound.min(*f);
        probe_bound = probe_bound.min(*q);
        if f.min(*q) < best {
            best = f.min(*q);
            witness = Some(*p);
        }
    }
    Ok(ReachEstimate {
        value: focal_bound.min(probe_bound),
        focal_bound,
        probe_bound,
        witness,
        samples: samples.len(),
        qualifier: SAMPLED_REGION_ONLY,
    })
}

/// Distance along `dir` from `p` to the first point whose nearest point is no
/// longer `p` alone. `∞` if none is found up to the maximal depth.
fn probe(domain: &ImplicitDomain, p: &VecN, dir: &VecN, s: &ReachSettings) -> f64 {
    let scale = domain.scale();
    let fails = |t: f64| -> bool {
        match signed_distance_with(domain, &(*p + *dir * t), &s.projection) {
            Ok(r) => r.multiplicity > 1 || r.foot.dist(p) > s.jump * scale,
            Err(_) => true,
        }
    };
    let depth = s.max_depth * scale;
    let step = depth / s.march_steps as f64;
    let mut lo = 0.0;
    let mut hi = None;
    for k in 1..=s.march_steps {
        let t = k as f64 * step;
        if fails(t) {
            hi = Some(t);
            break;
        }
        lo = t;
    }
    let Some(mut hi) = hi else {
        return f64::INFINITY;
    };
    while hi - lo > s.bisect_tol * scale {
        let mid = 0.5 * (lo + hi);
        if fails(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}
