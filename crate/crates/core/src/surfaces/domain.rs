use std::fmt;
use std::sync::Arc;

use crate::numkit::{gradient_fd, hessian_fd, FnField, SymMat, VecN};
use crate::{Error, Result};

/// Defining function `φ` with optional closed-form derivatives.
pub trait DefiningFunction: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &VecN) -> f64;
    fn gradient(&self, _x: &VecN) -> Option<VecN> {
        None
    }
    fn hessian(&self, _x: &VecN) -> Option<SymMat> {
        None
    }
}

struct Closure<F>(usize, F);

impl<F: Fn(&VecN) -> f64 + Send + Sync> DefiningFunction for Closure<F> {
    fn dim(&self) -> usize {
        self.0
    }
    fn value(&self, x: &VecN) -> f64 {
        (self.1)(x)
    }
}

/// A domain `Ω = {φ < 0}` together with the data the projection solver needs:
/// a length scale for tolerances and a lattice of points on `{φ = 0}` used to
/// seed nearest-point searches.
#[derive(Clone)]
pub struct ImplicitDomain {
    name: String,
    phi: Arc<dyn DefiningFunction>,
    scale: f64,
    seeds: Arc<Vec<VecN>>,
}

impl fmt::Debug for ImplicitDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ImplicitDomain")
            .field("name", &self.name)
            .field("dim", &self.dim())
            .field("scale", &self.scale)
            .field("seeds", &self.seeds.len())
            .finish()
    }
}

impl ImplicitDomain {
    pub fn new(name: impl Into<String>, phi: Arc<dyn DefiningFunction>) -> Self {
        ImplicitDomain { name: name.into(), phi, scale: 1.0, seeds: Arc::new(Vec::new()) }
    }

    /// Domain from a bare closure; derivatives fall back to finite differences.
    pub fn from_fn<F>(name: impl Into<String>, dim: usize, f: F) -> Self
    where
        F: Fn(&VecN) -> f64 + Send + Sync + 'static,
    {
        Self::new(name, Arc::new(Closure(dim, f)))
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_seeds(mut self, seeds: Vec<VecN>) -> Self {
        self.seeds = Arc::new(seeds);
        self
    }

    /// Seeds obtained by retracting a cell-centred box lattice onto `{φ = 0}`.
    /// Lattice points farther than one cell from the surface are discarded.
    pub fn with_box_seeds(self, lo: &[f64], hi: &[f64], counts: &[usize]) -> Self {
        let n = self.dim();
        assert!(lo.len() == n && hi.len() == n && counts.len() == n);
        let cell = (0..n).map(|i| (hi[i] - lo[i]) / counts[i] as f64).fold(0.0, f64::max);
        let total: usize = counts.iter().product();
        let mut seeds = Vec::new();
        for k in 0..total {
            let mut r = k;
            let x = VecN::from_fn(n, |i| {
                let j = r % counts[i];
                r /= counts[i];
                lo[i] + (j as f64 + 0.5) * (hi[i] - lo[i]) / counts[i] as f64
            });
            let g = self.gradient(&x);
            let gn = g.norm();
            if gn == 0.0 || (self.phi(&x) / gn).abs() > cell {
                continue;
            }
            if let Some(y) = self.retract(&x) {
                if y.dist(&x) <= 1.5 * cell {
                    seeds.push(y);
                }
            }
        }
        // thin out near-duplicates so the lattice stays roughly uniform
        let min_sep = 0.35 * cell;
        let mut kept: Vec<VecN> = Vec::with_capacity(seeds.len());
        for s in seeds {
            if kept.iter().rev().take(64).all(|k| k.dist(&s) > min_sep) {
                kept.push(s);
            }
        }
        self.with_seeds(kept)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn seeds(&self) -> &[VecN] {
        &self.seeds
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        let x = VecN::zeros(self.dim());
        self.phi.gradient(&x).is_some() && self.phi.hessian(&x).is_some()
    }

    #[inline]
    pub fn phi(&self, x: &VecN) -> f64 {
        self.phi.value(x)
    }

    pub fn contains(&self, x: &VecN) -> bool {
        self.phi(x) < 0.0
    }

    pub fn gradient(&self, x: &VecN) -> VecN {
        self.phi.gradient(x).unwrap_or_else(|| {
            let f = FnField::new(self.dim(), |y: &VecN| self.phi.value(y));
            let h = 1e-6 * (1.0 + x.norm());
            gradient_fd(&f, x, h).unwrap_or_else(|_| VecN::zeros(self.dim()))
        })
    }

    pub fn hessian(&self, x: &VecN) -> SymMat {
        self.phi.hessian(x).unwrap_or_else(|| {
            let f = FnField::new(self.dim(), |y: &VecN| self.phi.value(y));
            let h = 1e-4 * (1.0 + x.norm());
            hessian_fd(&f, x, h).unwrap_or_else(|_| SymMat::zeros(self.dim()))
        })
    }

    /// Newton iteration along `∇φ` onto `{φ = 0}`. `None` if it stalls.
    pub fn retract(&self, x: &VecN) -> Option<VecN> {
        let mut y = *x;
        for _ in 0..50 {
            let f = self.phi(&y);
            let g = self.gradient(&y);
            let g2 = g.norm_sq();
            if g2 == 0.0 || !f.is_finite() {
                return None;
            }
            let step = g * (f / g2);
            y -= step;
            if step.norm() <= 1e-15 * (self.scale + y.norm()) {
                break;
            }
        }
        let g = self.gradient(&y).norm();
        (y.is_finite() && g > 0.0 && (self.phi(&y) / g).abs() <= 1e-12 * (self.scale + y.norm()))
            .then_some(y)
    }

    /// Checks `|∇φ| ≥ 1e-8` at the given boundary samples.
    pub fn check_regular(&self, samples: &[VecN]) -> Result<()> {
        for p in samples {
            let gn = self.gradient(p).norm();
            if gn < 1e-8 {
                return Err(Error::SingularPoint { point: p.to_vec(), gradient_norm: gn });
            }
        }
        Ok(())
    }

    /// Unit normal pointing into `Ω`.
    pub fn inner_normal(&self, p: &VecN) -> Result<VecN> {
        let g = self.gradient(p);
        let gn = g.norm();
        if gn < 1e-8 || !gn.is_finite() {
            return Err(Error::SingularPoint { point: p.to_vec(), gradient_norm: gn });
        }
        Ok(g * (-1.0 / gn))
    }
}
