use std::sync::Arc;

use super::{choose_collar, default_alpha, make_cap, make_profile, Cap, CollarRatios, ConvexProfile};
use crate::mpsh::C2Field;
use crate::numkit::{SymMat, VecN};
use crate::surfaces::{m_convexity_defect, principal_curvatures, ImplicitDomain};
use crate::tubular::{
    jet_from_projection, reach_estimate, signed_distance_with, DistanceJet, ReachSettings, TubularCollar,
};
use crate::{Error, Exec, Result};

/// Where a point sits relative to the collar radii.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `0 < δ < ε₀`: smooth extension across `M`.
    Outside,
    /// `-ε₁ ≤ δ ≤ 0`: `χ` is the identity.
    Inner,
    /// `-ε₂ < δ < -ε₁`.
    Transition,
    /// `δ ≤ -ε₂`: `ρ` is constant.
    Plateau,
}

/// Value and derivatives of `ρ` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct BarrierJet {
    pub value: f64,
    pub gradient: VecN,
    pub hessian: SymMat,
    pub delta: f64,
    pub rho0: f64,
    pub region: Region,
    /// Distance jet; absent on the plateau.
    pub distance: Option<DistanceJet>,
}

#[derive(Debug, Clone)]
pub struct BarrierFunction {
    domain: ImplicitDomain,
    m: usize,
    collar: TubularCollar,
    profile: ConvexProfile,
    cap: Arc<dyn Cap>,
    c: f64,
}

/// Knobs for [`build_barrier`].
#[derive(Debug, Clone)]
pub struct BarrierOptions {
    /// `None` selects `2(m-1)/ε`.
    pub alpha: Option<f64>,
    pub safety: f64,
    pub ratios: CollarRatios,
    pub cap_degree: usize,
    /// Known reach; estimated from `boundary` when absent.
    pub reach: Option<f64>,
    pub reach_settings: ReachSettings,
    /// Boundary samples used for the m-convexity precondition (and the reach
    /// estimate).
    pub boundary: Vec<VecN>,
    pub exec: Exec,
}

impl Default for BarrierOptions {
    fn default() -> Self {
        BarrierOptions {
            alpha: None,
            safety: 0.99,
            ratios: CollarRatios::default(),
            cap_degree: 3,
            reach: None,
            reach_settings: ReachSettings::default(),
            boundary: Vec::new(),
            exec: Exec::available(),
        }
    }
}

/// Assembles `ρ = c·χ(ρ₀)` after checking that every boundary sample is
/// m-convex and that `ε` does not exceed the reach.
pub fn build_barrier(domain: &ImplicitDomain, m: usize, eps: f64, opts: &BarrierOptions) -> Result<BarrierFunction> {
    let n = domain.dim();
    if m == 0 || m >= n {
        return Err(Error::MOutOfRange { m, max: n - 1 });
    }
    if opts.boundary.is_empty() {
        return Err(Error::EmptySamples);
    }
    domain.check_regular(&opts.boundary)?;
    let defects = opts.exec.try_map(&opts.boundary, |p| {
        let sp = principal_curvatures(domain, p)?;
        let kmax = sp.curvatures.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        Ok((m_convexity_defect(&sp, m)?, 1e-9 * (1.0 + kmax)))
    })?;
    for (p, (sigma, tol)) in opts.boundary.iter().zip(&defects) {
        if *sigma < -tol {
            return Err(Error::NotMConvex { point: p.to_vec(), sigma: *sigma });
        }
    }
    let reach = match opts.reach {
        Some(r) => r,
        None => reach_estimate(domain, &opts.boundary, &opts.reach_settings, opts.exec)?.value,
    };
    if eps > reach {
        return Err(Error::ReachTooSmall { requested: eps, reach });
    }
    let profile = make_profile(opts.alpha.unwrap_or_else(|| default_alpha(m, eps)), m, eps)?;
    let collar = choose_collar(&profile, reach, opts.safety, opts.ratios)?;
    let cap = make_cap(&collar, &profile, opts.cap_degree)?;
    let c = -1.0 / profile.h(-collar.eps1);
    Ok(BarrierFunction { domain: domain.clone(), m, collar, profile, cap: Arc::new(cap), c })
}

/// `h(δ(x))` on the collar `C_{ε₀}` (and on `0 < δ < ε₀`), `h(-ε₀)` beyond it.
pub fn rho0(domain: &ImplicitDomain, collar: &TubularCollar, profile: &ConvexProfile, x: &VecN) -> Result<f64> {
    let pr = signed_distance_with(domain, x, &collar.projection)?;
    rho0_of_delta(collar, profile, pr.delta, x)
}

fn rho0_of_delta(collar: &TubularCollar, profile: &ConvexProfile, delta: f64, x: &VecN) -> Result<f64> {
    if delta >= collar.eps0 {
        return Err(Error::OutsideDomain { point: x.to_vec() });
    }
    Ok(profile.h(delta.max(-collar.eps0)))
}

impl BarrierFunction {
    pub fn domain(&self) -> &ImplicitDomain {
        &self.domain
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn collar(&self) -> &TubularCollar {
        &self.collar
    }

    pub fn profile(&self) -> &ConvexProfile {
        &self.profile
    }

    pub fn cap(&self) -> &Arc<dyn Cap> {
        &self.cap
    }

    /// `c = -1/h(-ε₁)`.
    pub fn scale(&self) -> f64 {
        self.c
    }

    /// Replaces the smoothing cap. Intended for negative controls.
    pub fn with_cap(mut self, cap: Arc<dyn Cap>) -> Self {
        self.cap = cap;
        self
    }

    /// Constant value of `ρ` on the plateau.
    pub fn plateau_value(&self) -> f64 {
        self.c * self.cap.value(self.profile.h(-self.collar.eps0))
    }

    /// Signed distance of the level set `{ρ = t}`, `t ∈ (-1, 0]`.
    pub fn level_delta(&self, t: f64) -> f64 {
        self.profile.inverse(t / self.c)
    }

    fn region(&self, delta: f64) -> Region {
        if delta > 0.0 {
            Region::Outside
        } else if delta >= -self.collar.eps1 {
            Region::Inner
        } else if delta > -self.collar.eps2 {
            Region::Transition
        } else {
            Region::Plateau
        }
    }

    /// `ρ(x)` without derivatives.
    pub fn value_at(&self, x: &VecN) -> Result<f64> {
        let pr = signed_distance_with(&self.domain, x, &self.collar.projection)?;
        let r0 = rho0_of_delta(&self.collar, &self.profile, pr.delta, x)?;
        Ok(self.c * self.cap.value(r0))
    }

    pub fn evaluate(&self, x: &VecN) -> Result<BarrierJet> {
        let n = self.domain.dim();
        let pr = signed_distance_with(&self.domain, x, &self.collar.projection)?;
        let delta = pr.delta;
        let r0 = rho0_of_delta(&self.collar, &self.profile, delta, x)?;
        let value = self.c * self.cap.value(r0);
        let region = self.region(delta);
        if region == Region::Plateau {
            return Ok(BarrierJet {
                value,
                gradient: VecN::zeros(n),
                hessian: SymMat::zeros(n),
                delta,
                rho0: r0,
                region,
                distance: None,
            });
        }
        if pr.multiplicity > 1 {
            return Err(Error::NonUniqueFoot { point: x.to_vec(), multiplicity: pr.multiplicity });
        }
        let dj = jet_from_projection(&self.domain, pr)?;
        let (h1, h2) = (self.profile.dh(delta), self.profile.ddh(delta));
        let (k1, k2) = (self.cap.d1(r0), self.cap.d2(r0));
        let nn = SymMat::outer(&dj.gradient);
        let gradient = dj.gradient * (self.c * k1 * h1);
        let hessian = dj.hessian.scaled(h1).add_scaled(h2, &nn).scaled(k1).add_scaled(k2 * h1 * h1, &nn).scaled(self.c);
        Ok(BarrierJet { value, gradient, hessian, delta, rho0: r0, region, distance: Some(dj) })
    }

    /// The closed-form spectrum of `Hess ρ`, ascending:
    /// `c χ̇ ḣ ν_j(x)` for each principal direction and
    /// `c (χ̇ ḧ + χ̈ ḣ²)` for the normal. All zero on the plateau.
    pub fn eigenvalue_list(&self, jet: &BarrierJet) -> Vec<f64> {
        let n = self.domain.dim();
        let Some(dj) = &jet.distance else {
            return vec![0.0; n];
        };
        let d = jet.delta;
        let (h1, h2) = (self.profile.dh(d), self.profile.ddh(d));
        let (k1, k2) = (self.cap.d1(jet.rho0), self.cap.d2(jet.rho0));
        let mut out: Vec<f64> = dj.transported.iter().map(|nu| self.c * k1 * h1 * nu).collect();
        out.push(self.c * (k1 * h2 + k2 * h1 * h1));
        out.sort_by(f64::total_cmp);
        out
    }
}

impl C2Field for BarrierFunction {
    fn dim(&self) -> usize {
        self.domain.dim()
    }
    fn value(&self, x: &VecN) -> Result<f64> {
        self.value_at(x)
    }
    fn gradient(&self, x: &VecN) -> Result<VecN> {
        Ok(self.evaluate(x)?.gradient)
    }
    fn hessian(&self, x: &VecN) -> Result<SymMat> {
        Ok(self.evaluate(x)?.hessian)
    }
}

impl crate::numkit::ScalarField for BarrierFunction {
    fn dim(&self) -> usize {
        self.domain.dim()
    }
    fn value(&self, x: &VecN) -> Result<f64> {
        self.value_at(x)
    }
}
