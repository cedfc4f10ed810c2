use super::SAMPLED_REGION_ONLY;
use crate::numkit::VecN;
use crate::surfaces::{principal_curvatures, ImplicitDomain};
use crate::{Error, Exec, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `ν_j ≤ 1/ε`.
    Upper,
    /// `ν_j ≥ -(m-1)/ε`.
    Lower,
    /// `Σ_{ν_j ≤ 0} ν_j ≥ -(m-1)/ε`.
    NegativePart,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundViolation {
    pub point: VecN,
    pub kind: BoundKind,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub eps: f64,
    pub m: usize,
    pub samples: usize,
    pub worst_upper_margin: f64,
    pub worst_lower_margin: f64,
    pub worst_negative_part_margin: f64,
    pub violations: Vec<BoundViolation>,
    pub qualifier: &'static str,
}

impl BoundsReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the curvature bounds implied by reach `ε` and m-convexity at every
/// sample. Margins below `-1e-12 / ε` count as violations.
pub fn curvature_bounds_check(
    domain: &ImplicitDomain,
    eps: f64,
    m: usize,
    samples: &[VecN],
    exec: Exec,
) -> Result<BoundsReport> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(eps > 0.0) {
        return Err(Error::invalid("eps", format!("must be positive, got {eps}")));
    }
    let n = domain.dim();
    if m == 0 || m >= n {
        return Err(Error::MOutOfRange { m, max: n - 1 });
    }
    let inv = 1.0 / eps;
    let floor = (m - 1) as f64 * inv;
    let slack = 1e-12 * inv.max(f64::MIN_POSITIVE);
    let pts = exec.try_map(samples, |p| principal_curvatures(domain, p))?;
    let mut rep = BoundsReport {
        eps,
        m,
        samples: samples.len(),
        worst_upper_margin: f64::INFINITY,
        worst_lower_margin: f64::INFINITY,
        worst_negative_part_margin: f64::INFINITY,
        violations: Vec::new(),
        qualifier: SAMPLED_REGION_ONLY,
    };
    for sp in &pts {
        let lo = sp.curvatures[0];
        let hi = sp.curvatures[sp.curvatures.len() - 1];
        let neg: f64 = sp.curvatures.iter().filter(|v| **v <= 0.0).sum();
        for (kind, margin) in [(BoundKind::Upper, inv - hi), (BoundKind::Lower, lo + floor), (BoundKind::NegativePart, neg + floor)] {
            let worst = match kind {
                BoundKind::Upper => &mut rep.worst_upper_margin,
                BoundKind::Lower => &mut rep.worst_lower_margin,
                BoundKind::NegativePart => &mut rep.worst_negative_part_margin,
            };
            *worst = worst.min(margin);
            if margin < -slack {
                rep.violations.push(BoundViolation { point: sp.position, kind, margin });
            }
        }
    }
    Ok(rep)
}
