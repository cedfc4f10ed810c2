use rand::Rng;

use super::projection::ProjectionSettings;
use crate::numkit::VecN;
use crate::surfaces::ImplicitDomain;
use crate::{Error, Result};

/// Working radii of the collar around `M`:
/// `0 < ε₁ < ε₂ < ε₀ < ε₀′ < reach / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubularCollar {
    pub reach: f64,
    pub eps0_prime: f64,
    pub eps0: f64,
    pub eps2: f64,
    pub eps1: f64,
    pub projection: ProjectionSettings,
}

impl TubularCollar {
    pub fn new(reach: f64, eps0_prime: f64, eps0: f64, eps2: f64, eps1: f64) -> Result<Self> {
        if !(reach > 0.0) {
            return Err(Error::invalid("reach", format!("must be positive, got {reach}")));
        }
        let ordered = 0.0 < eps1 && eps1 < eps2 && eps2 < eps0 && eps0 < eps0_prime && eps0_prime < reach / 2.0;
        if !ordered || !eps0_prime.is_finite() {
            return Err(Error::invalid(
                "collar",
                format!(
                    "radii must satisfy 0 < eps1 < eps2 < eps0 < eps0' < reach/2, got \
                     eps1={eps1}, eps2={eps2}, eps0={eps0}, eps0'={eps0_prime}, reach={reach}"
                ),
            ));
        }
        Ok(TubularCollar { reach, eps0_prime, eps0, eps2, eps1, projection: ProjectionSettings::default() })
    }

    pub fn with_projection(mut self, s: ProjectionSettings) -> Self {
        self.projection = s;
        self
    }
}

/// A point at known depth below a boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarSample {
    pub point: VecN,
    pub foot: VecN,
    /// Expected signed distance (negative: inside).
    pub delta: f64,
}

/// Offsets each boundary point inward along its normal by a uniform random
/// depth in `[depth.0, depth.1]`.
pub fn collar_samples<R: Rng + ?Sized>(
    domain: &ImplicitDomain,
    boundary: &[VecN],
    depth: (f64, f64),
    rng: &mut R,
) -> Result<Vec<CollarSample>> {
    if boundary.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(0.0 <= depth.0 && depth.0 <= depth.1) {
        return Err(Error::invalid("depth", format!("need 0 <= lo <= hi, got {depth:?}")));
    }
    boundary
        .iter()
        .map(|p| {
            let s = depth.0 + (depth.1 - depth.0) * rng.random::<f64>();
            let n = domain.inner_normal(p)?;
            Ok(CollarSample { point: *p + n * s, foot: *p, delta: -s })
        })
        .collect()
}
