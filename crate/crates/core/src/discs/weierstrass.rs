use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C;

use super::map::{ConformalMap, Jet, ParamDomain};
use super::quadrature::gauss_legendre;
use crate::numkit::VecN;
use crate::{Error, Result};

type CFn = Arc<dyn Fn(C) -> C + Send + Sync>;

/// Integration path from the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathKind {
    Straight,
    /// Along the circle `|ζ| = |base|` to `arg z`, then radially to `z`.
    ArcThenRadial,
}

/// Weierstrass data: Gauss map `g`, height differential `dh = h(z) dz`, and
/// derivatives of both, with the value of the surface at the base point.
#[derive(Clone)]
pub struct WeierstrassEntry {
    pub name: &'static str,
    g: CFn,
    dg: CFn,
    h: CFn,
    dh: CFn,
    pub base: C,
    pub base_value: [f64; 3],
    pub path: PathKind,
    pub branch_points: Vec<[f64; 2]>,
}

impl fmt::Debug for WeierstrassEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeierstrassEntry").field("name", &self.name).field("base", &self.base).finish()
    }
}

impl WeierstrassEntry {
    /// `g = z`, `dh = dz/z`: `(-cosh s cos θ, -cosh s sin θ, s)` for
    /// `z = e^{s+iθ}`.
    pub fn catenoid() -> Self {
        WeierstrassEntry {
            name: "catenoid",
            g: Arc::new(|z| z),
            dg: Arc::new(|_| C::new(1.0, 0.0)),
            h: Arc::new(|z| z.inv()),
            dh: Arc::new(|z| -(z * z).inv()),
            base: C::new(1.0, 0.0),
            base_value: [-1.0, 0.0, 0.0],
            path: PathKind::ArcThenRadial,
            branch_points: Vec::new(),
        }
    }

    /// `g = z`, `dh = i dz/z`: `(sinh s sin θ, -sinh s cos θ, -θ)` for
    /// `z = e^{s+iθ}` with `|θ| < π`.
    pub fn helicoid() -> Self {
        let i = C::new(0.0, 1.0);
        WeierstrassEntry {
            name: "helicoid",
            g: Arc::new(|z| z),
            dg: Arc::new(|_| C::new(1.0, 0.0)),
            h: Arc::new(move |z| i / z),
            dh: Arc::new(move |z| -i / (z * z)),
            base: C::new(1.0, 0.0),
            base_value: [0.0, 0.0, 0.0],
            path: PathKind::Straight,
            branch_points: Vec::new(),
        }
    }

    /// `g = z`, `dh = z dz`:
    /// `(½(x - x³/3 + xy²), -½(y + x²y - y³/3), (x² - y²)/2)`.
    pub fn enneper() -> Self {
        WeierstrassEntry {
            name: "enneper",
            g: Arc::new(|z| z),
            dg: Arc::new(|_| C::new(1.0, 0.0)),
            h: Arc::new(|z| z),
            dh: Arc::new(|_| C::new(1.0, 0.0)),
            base: C::new(0.0, 0.0),
            base_value: [0.0, 0.0, 0.0],
            path: PathKind::Straight,
            branch_points: Vec::new(),
        }
    }

    /// `Φ = (½(1/g - g), (i/2)(1/g + g), 1) h`.
    pub fn phi(&self, z: C) -> [C; 3] {
        let (g, h) = ((self.g)(z), (self.h)(z));
        let gi = g.inv();
        let i2 = C::new(0.0, 0.5);
        [0.5 * (gi - g) * h, i2 * (gi + g) * h, h]
    }

    pub fn dphi(&self, z: C) -> [C; 3] {
        let (g, dg, h, dh) = ((self.g)(z), (self.dg)(z), (self.h)(z), (self.dh)(z));
        let gi = g.inv();
        let dgi = -dg * gi * gi;
        let i2 = C::new(0.0, 0.5);
        [0.5 * ((dgi - dg) * h + (gi - g) * dh), i2 * ((dgi + dg) * h + (gi + g) * dh), dh]
    }
}

/// `f(z) = f(base) + Re ∫_base^z Φ`, integrated with composite 16-point
/// Gauss-Legendre panels at `nodes_per_unit` nodes per unit path length.
#[derive(Debug, Clone)]
pub struct WeierstrassMap {
    pub entry: WeierstrassEntry,
    pub domain: ParamDomain,
    pub nodes_per_unit: usize,
    rule: (Vec<f64>, Vec<f64>),
}

impl WeierstrassMap {
    pub fn new(entry: WeierstrassEntry, domain: ParamDomain) -> Self {
        WeierstrassMap { entry, domain, nodes_per_unit: 64, rule: gauss_legendre(16) }
    }

    fn integrate_segment(&self, z: &dyn Fn(f64) -> C, dz: &dyn Fn(f64) -> C, len: f64, acc: &mut [C; 3]) {
        if len == 0.0 {
            return;
        }
        let panels = ((len * self.nodes_per_unit as f64 / 16.0).ceil() as usize).max(1);
        let (x, w) = &self.rule;
        for p in 0..panels {
            let (a, b) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (xi, wi) in x.iter().zip(w) {
                let t = mid + half * xi;
                let f = self.entry.phi(z(t));
                let d = dz(t) * (half * wi);
                for k in 0..3 {
                    acc[k] += f[k] * d;
                }
            }
        }
    }

    /// `∫_base^z Φ` along the entry's path.
    pub fn integral(&self, z: C) -> [C; 3] {
        let b = self.entry.base;
        let mut acc = [C::new(0.0, 0.0); 3];
        match self.entry.path {
            PathKind::Straight => {
                let d = z - b;
                self.integrate_segment(&|t| b + d * t, &|_| d, d.norm(), &mut acc);
            }
            PathKind::ArcThenRadial => {
                let (r0, t0) = b.to_polar();
                let (r1, t1) = z.to_polar();
                let mut dt = t1 - t0;
                while dt > PI {
                    dt -= 2.0 * PI;
                }
                while dt <= -PI {
                    dt += 2.0 * PI;
                }
                let i = C::new(0.0, 1.0);
                let arc = |t: f64| C::from_polar(r0, t0 + dt * t);
                self.integrate_segment(&arc, &|t| i * arc(t) * dt, r0 * dt.abs(), &mut acc);
                let e = C::from_polar(1.0, t0 + dt);
                self.integrate_segment(&|t| e * (r0 + (r1 - r0) * t), &|_| e * (r1 - r0), (r1 - r0).abs(), &mut acc);
            }
        }
        acc
    }
}

impl ConformalMap for WeierstrassMap {
    fn dim(&self) -> usize {
        3
    }
    fn domain(&self) -> ParamDomain {
        self.domain
    }
    fn jet(&self, z: [f64; 2]) -> Result<Jet> {
        let zc = C::new(z[0], z[1]);
        let ig = self.integral(zc);
        let f = self.entry.phi(zc);
        let df = self.entry.dphi(zc);
        let bv = self.entry.base_value;
        let jet = Jet {
            value: VecN::from_fn(3, |k| bv[k] + ig[k].re),
            fx: VecN::from_fn(3, |k| f[k].re),
            fy: VecN::from_fn(3, |k| -f[k].im),
            fxx: VecN::from_fn(3, |k| df[k].re),
            fxy: VecN::from_fn(3, |k| -df[k].im),
            fyy: VecN::from_fn(3, |k| -df[k].re),
        };
        if !jet.value.is_finite() || !jet.fx.is_finite() || !jet.fxx.is_finite() {
            return Err(Error::NonFinite { context: "weierstrass jet" });
        }
        Ok(jet)
    }
    fn branch_points(&self) -> Vec<[f64; 2]> {
        self.entry.branch_points.clone()
    }
    fn name(&self) -> String {
        format!("weierstrass-{}", self.entry.name)
    }
}
