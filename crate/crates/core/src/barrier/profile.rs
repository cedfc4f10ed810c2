use crate::tubular::TubularCollar;
use crate::{Error, Result};

/// `h(t) = (e^{αt} - 1)/α`, made against a curvature threshold `(m-1)/ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexProfile {
    alpha: f64,
    m: usize,
    eps: f64,
}

impl ConvexProfile {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    #[inline]
    pub fn h(&self, t: f64) -> f64 {
        (self.alpha * t).exp_m1() / self.alpha
    }

    #[inline]
    pub fn dh(&self, t: f64) -> f64 {
        (self.alpha * t).exp()
    }

    #[inline]
    pub fn ddh(&self, t: f64) -> f64 {
        self.alpha * (self.alpha * t).exp()
    }

    /// `h⁻¹(y)`, defined for `y > -1/α`.
    pub fn inverse(&self, y: f64) -> f64 {
        (self.alpha * y).ln_1p() / self.alpha
    }

    /// `(m-1)/ε`.
    pub fn threshold(&self) -> f64 {
        (self.m - 1) as f64 / self.eps
    }

    /// Largest `t` with `ḧ(-t) ≥ (m-1)/ε`: `ln(αε/(m-1))/α`, infinite for
    /// `m = 1`.
    pub fn threshold_radius(&self) -> f64 {
        if self.m == 1 {
            f64::INFINITY
        } else {
            (self.alpha / self.threshold()).ln() / self.alpha
        }
    }
}

/// Requires `α > (m-1)/ε` (strict) and `α > 0`.
pub fn make_profile(alpha: f64, m: usize, eps: f64) -> Result<ConvexProfile> {
    if m == 0 {
        return Err(Error::MOutOfRange { m, max: crate::numkit::MAX_DIM - 1 });
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::invalid("eps", format!("must be positive and finite, got {eps}")));
    }
    let thr = (m - 1) as f64 / eps;
    if !(alpha > thr && alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::invalid(
            "alpha",
            format!("need alpha > (m-1)/eps = {thr} strictly (and alpha > 0), got {alpha}"),
        ));
    }
    Ok(ConvexProfile { alpha, m, eps })
}

/// `2(m-1)/ε`, or `1/ε` when `m = 1`.
pub fn default_alpha(m: usize, eps: f64) -> f64 {
    if m <= 1 {
        1.0 / eps
    } else {
        2.0 * (m - 1) as f64 / eps
    }
}

/// `ε₀/ε₀′`, `ε₂/ε₀`, `ε₁/ε₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarRatios {
    pub eps0: f64,
    pub eps2: f64,
    pub eps1: f64,
}

impl Default for CollarRatios {
    fn default() -> Self {
        CollarRatios { eps0: 0.9, eps2: 0.6, eps1: 0.3 }
    }
}

/// `ε₀′ = safety · min(ε/2, t*)` followed by the ratio chain. Safety multiplies
/// both terms so that `ε₀′ < reach/2` holds strictly even when `ε` equals the
/// reach.
pub fn choose_collar(profile: &ConvexProfile, reach: f64, safety: f64, ratios: CollarRatios) -> Result<TubularCollar> {
    if !(safety > 0.0 && safety < 1.0) {
        return Err(Error::invalid("safety", format!("must lie in (0, 1), got {safety}")));
    }
    let r = ratios;
    if !(0.0 < r.eps1 && r.eps1 < r.eps2 && r.eps2 < 1.0 && 0.0 < r.eps0 && r.eps0 < 1.0) {
        return Err(Error::invalid("ratios", format!("need 0 < eps1 < eps2 < 1 and 0 < eps0 < 1, got {r:?}")));
    }
    let eps = profile.eps();
    if eps > reach {
        return Err(Error::ReachTooSmall { requested: eps, reach });
    }
    let t_star = profile.threshold_radius();
    assert!(t_star > 0.0, "make_profile guarantees alpha > (m-1)/eps");
    let eps0p = safety * (eps / 2.0).min(t_star);
    let eps0 = r.eps0 * eps0p;
    TubularCollar::new(reach, eps0p, eps0, r.eps2 * eps0, r.eps1 * eps0)
}
