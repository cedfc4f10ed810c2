use std::fmt::Debug;

use super::ConvexProfile;
use crate::tubular::TubularCollar;
use crate::{Error, Result};

/// A `C²` increasing convex function that is constant below `lo()` and the
/// identity above `hi()`.
pub trait Cap: Send + Sync + Debug {
    fn value(&self, t: f64) -> f64;
    fn d1(&self, t: f64) -> f64;
    fn d2(&self, t: f64) -> f64;
    fn lo(&self) -> f64;
    fn hi(&self) -> f64;
}

/// `χ̇` is a symmetric smoothstep of odd degree 3, 5 or 7 in the rescaled
/// variable `s = (t - a)/(b - a)`, integrated in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingCap {
    a: f64,
    b: f64,
    degree: usize,
}

impl SmoothingCap {
    pub fn new(a: f64, b: f64, degree: usize) -> Result<Self> {
        if !(a < b && a.is_finite() && b.is_finite()) {
            return Err(Error::invalid("cap", format!("degenerate interval [{a}, {b}]")));
        }
        if !matches!(degree, 3 | 5 | 7) {
            return Err(Error::invalid("degree", format!("must be 3, 5 or 7, got {degree}")));
        }
        Ok(SmoothingCap { a, b, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn s(&self, t: f64) -> f64 {
        (t - self.a) / (self.b - self.a)
    }

    // smoothstep S, its antiderivative W with W(0) = 0, and S'
    fn step(&self, s: f64) -> (f64, f64, f64) {
        let s2 = s * s;
        match self.degree {
            3 => (s2 * (3.0 - 2.0 * s), s2 * s * (1.0 - 0.5 * s), 6.0 * s * (1.0 - s)),
            5 => (
                s2 * s * (10.0 + s * (-15.0 + 6.0 * s)),
                s2 * s2 * (2.5 + s * (-3.0 + s)),
                30.0 * s2 * (1.0 - s) * (1.0 - s),
            ),
            _ => (
                s2 * s2 * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s))),
                s2 * s2 * s * (7.0 + s * (-14.0 + s * (10.0 - 2.5 * s))),
                140.0 * s2 * s * (1.0 - s).powi(3),
            ),
        }
    }
}

impl Cap for SmoothingCap {
    fn value(&self, t: f64) -> f64 {
        let w = self.b - self.a;
        if t >= self.b {
            t
        } else if t <= self.a {
            self.b - 0.5 * w
        } else {
            self.b - w * (0.5 - self.step(self.s(t)).1)
        }
    }

    fn d1(&self, t: f64) -> f64 {
        if t >= self.b {
            1.0
        } else if t <= self.a {
            0.0
        } else {
            self.step(self.s(t)).0
        }
    }

    fn d2(&self, t: f64) -> f64 {
        if t >= self.b || t <= self.a {
            0.0
        } else {
            self.step(self.s(t)).2 / (self.b - self.a)
        }
    }

    fn lo(&self) -> f64 {
        self.a
    }

    fn hi(&self) -> f64 {
        self.b
    }
}

/// Cap with thresholds `h(-ε₂) < h(-ε₁)`; convexity is re-checked on 10³
/// samples of the transition as a guard against construction bugs.
pub fn make_cap(collar: &TubularCollar, profile: &ConvexProfile, degree: usize) -> Result<SmoothingCap> {
    let a = profile.h(-collar.eps2);
    let b = profile.h(-collar.eps1);
    if !(a < b && b < 0.0) {
        return Err(Error::invalid("cap", format!("need h(-eps2) < h(-eps1) < 0, got {a}, {b}")));
    }
    let cap = SmoothingCap::new(a, b, degree)?;
    for k in 0..1000 {
        let t = a + (b - a) * (k as f64 + 0.5) / 1000.0;
        if cap.d2(t) < 0.0 || !(0.0..=1.0).contains(&cap.d1(t)) {
            return Err(Error::invalid("cap", format!("convexity check failed at t = {t}")));
        }
    }
    Ok(cap)
}
