use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::parametric::{parametric_curvatures, ParamJet, Parametrization};
use super::{DefiningFunction, ImplicitDomain};
use crate::numkit::{SymMat, VecN, MAX_DIM};
use crate::{Error, Result};

/// Test surfaces with closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceKind {
    /// `{x_n < 0}`.
    Plane { n: usize },
    /// Ball of the given radius.
    Sphere { n: usize, radius: f64 },
    /// `{x₁² + x₂² < R²}`.
    Cylinder { n: usize, radius: f64 },
    /// `{|x_n| < w}`.
    Slab { n: usize, half_width: f64 },
    /// Inside of the catenoid `x² + y² = a² cosh²(z/a)`.
    Catenoid { scale: f64 },
    /// One side of `x sin z = y cos z`.
    Helicoid,
    /// Below Scherk's doubly periodic surface `e^z cos x = cos y`.
    Scherk,
    /// Enneper's surface over the parameter square `[-r, r]²`; parametric only.
    Enneper { radius: f64 },
}

impl SurfaceKind {
    pub fn dim(&self) -> usize {
        match *self {
            SurfaceKind::Plane { n }
            | SurfaceKind::Sphere { n, .. }
            | SurfaceKind::Cylinder { n, .. }
            | SurfaceKind::Slab { n, .. } => n,
            _ => 3,
        }
    }

    pub fn is_minimal(&self) -> bool {
        matches!(
            self,
            SurfaceKind::Catenoid { .. } | SurfaceKind::Helicoid | SurfaceKind::Scherk | SurfaceKind::Enneper { .. }
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            SurfaceKind::Plane { .. } => "plane",
            SurfaceKind::Sphere { .. } => "sphere",
            SurfaceKind::Cylinder { .. } => "cylinder",
            SurfaceKind::Slab { .. } => "slab",
            SurfaceKind::Catenoid { .. } => "catenoid",
            SurfaceKind::Helicoid => "helicoid",
            SurfaceKind::Scherk => "scherk",
            SurfaceKind::Enneper { .. } => "enneper",
        }
    }
}

/// A catalog surface: implicit domain (when it has one), parametrization
/// (when it has one), closed-form curvatures and the known reach.
#[derive(Clone)]
pub struct CatalogEntry {
    pub kind: SurfaceKind,
    /// Half-size of the sampled boundary region (ignored for the sphere).
    pub extent: f64,
    domain: Option<ImplicitDomain>,
    param: Option<Arc<dyn Parametrization>>,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("kind", &self.kind).field("extent", &self.extent).finish()
    }
}

struct Field(SurfaceKind);

impl DefiningFunction for Field {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn value(&self, x: &VecN) -> f64 {
        let n = x.dim();
        match self.0 {
            SurfaceKind::Plane { .. } => x[n - 1],
            SurfaceKind::Sphere { radius, .. } => x.norm_sq() - radius * radius,
            SurfaceKind::Cylinder { radius, .. } => x[0] * x[0] + x[1] * x[1] - radius * radius,
            SurfaceKind::Slab { half_width, .. } => x[n - 1] * x[n - 1] - half_width * half_width,
            SurfaceKind::Catenoid { scale: a } => {
                let c = (x[2] / a).cosh();
                x[0] * x[0] + x[1] * x[1] - a * a * c * c
            }
            SurfaceKind::Helicoid => x[0] * x[2].sin() - x[1] * x[2].cos(),
            SurfaceKind::Scherk => x[2].exp() * x[0].cos() - x[1].cos(),
            SurfaceKind::Enneper { .. } => unreachable!("enneper has no implicit form"),
        }
    }

    fn gradient(&self, x: &VecN) -> Option<VecN> {
        let n = x.dim();
        let mut g = VecN::zeros(n);
        match self.0 {
            SurfaceKind::Plane { .. } => g[n - 1] = 1.0,
            SurfaceKind::Sphere { .. } => g = *x * 2.0,
            SurfaceKind::Cylinder { .. } => {
                g[0] = 2.0 * x[0];
                g[1] = 2.0 * x[1];
            }
            SurfaceKind::Slab { .. } => g[n - 1] = 2.0 * x[n - 1],
            SurfaceKind::Catenoid { scale: a } => {
                g[0] = 2.0 * x[0];
                g[1] = 2.0 * x[1];
                g[2] = -a * (2.0 * x[2] / a).sinh();
            }
            SurfaceKind::Helicoid => {
                let (s, c) = x[2].sin_cos();
                g[0] = s;
                g[1] = -c;
                g[2] = x[0] * c + x[1] * s;
            }
            SurfaceKind::Scherk => {
                let e = x[2].exp();
                g[0] = -e * x[0].sin();
                g[1] = x[1].sin();
                g[2] = e * x[0].cos();
            }
            SurfaceKind::Enneper { .. } => return None,
        }
        Some(g)
    }

    fn hessian(&self, x: &VecN) -> Option<SymMat> {
        let n = x.dim();
        let mut h = SymMat::zeros(n);
        match self.0 {
            SurfaceKind::Plane { .. } => {}
            SurfaceKind::Sphere { .. } => h = SymMat::identity(n).scaled(2.0),
            SurfaceKind::Cylinder { .. } => {
                h.set(0, 0, 2.0);
                h.set(1, 1, 2.0);
            }
            SurfaceKind::Slab { .. } => h.set(n - 1, n - 1, 2.0),
            SurfaceKind::Catenoid { scale: a } => {
                h.set(0, 0, 2.0);
                h.set(1, 1, 2.0);
                h.set(2, 2, -2.0 * (2.0 * x[2] / a).cosh());
            }
            SurfaceKind::Helicoid => {
                let (s, c) = x[2].sin_cos();
                h.set(0, 2, c);
                h.set(1, 2, s);
                h.set(2, 2, -x[0] * s + x[1] * c);
            }
            SurfaceKind::Scherk => {
                let e = x[2].exp();
                let (s, c) = x[0].sin_cos();
                h.set(0, 0, -e * c);
                h.set(0, 2, -e * s);
                h.set(1, 1, x[1].cos());
                h.set(2, 2, e * c);
            }
            SurfaceKind::Enneper { .. } => return None,
        }
        Some(h)
    }
}

struct CatenoidPatch {
    a: f64,
    vmax: f64,
}

impl Parametrization for CatenoidPatch {
    fn jet(&self, u: f64, v: f64) -> ParamJet {
        let a = self.a;
        let (su, cu) = u.sin_cos();
        let (ch, sh) = (v.cosh(), v.sinh());
        ParamJet {
            x: VecN::new(&[a * ch * cu, a * ch * su, a * v]),
            xu: VecN::new(&[-a * ch * su, a * ch * cu, 0.0]),
            xv: VecN::new(&[a * sh * cu, a * sh * su, a]),
            xuu: VecN::new(&[-a * ch * cu, -a * ch * su, 0.0]),
            xuv: VecN::new(&[-a * sh * su, a * sh * cu, 0.0]),
            xvv: VecN::new(&[a * ch * cu, a * ch * su, 0.0]),
        }
    }
    fn chart(&self) -> ([f64; 2], [f64; 2]) {
        ([0.0, 2.0 * PI], [-self.vmax, self.vmax])
    }
}

struct HelicoidPatch {
    umax: f64,
    vmax: f64,
}

impl Parametrization for HelicoidPatch {
    fn jet(&self, u: f64, v: f64) -> ParamJet {
        let (sv, cv) = v.sin_cos();
        let (ch, sh) = (u.cosh(), u.sinh());
        ParamJet {
            x: VecN::new(&[sh * cv, sh * sv, v]),
            xu: VecN::new(&[ch * cv, ch * sv, 0.0]),
            xv: VecN::new(&[-sh * sv, sh * cv, 1.0]),
            xuu: VecN::new(&[sh * cv, sh * sv, 0.0]),
            xuv: VecN::new(&[-ch * sv, ch * cv, 0.0]),
            xvv: VecN::new(&[-sh * cv, -sh * sv, 0.0]),
        }
    }
    fn chart(&self) -> ([f64; 2], [f64; 2]) {
        ([-self.umax, self.umax], [-self.vmax, self.vmax])
    }
}

struct ScherkPatch {
    half: f64,
}

impl Parametrization for ScherkPatch {
    fn jet(&self, u: f64, v: f64) -> ParamJet {
        let (tu, tv) = (u.tan(), v.tan());
        let (su2, sv2) = (1.0 / (u.cos() * u.cos()), 1.0 / (v.cos() * v.cos()));
        ParamJet {
            x: VecN::new(&[u, v, (v.cos() / u.cos()).ln()]),
            xu: VecN::new(&[1.0, 0.0, tu]),
            xv: VecN::new(&[0.0, 1.0, -tv]),
            xuu: VecN::new(&[0.0, 0.0, su2]),
            xuv: VecN::new(&[0.0, 0.0, 0.0]),
            xvv: VecN::new(&[0.0, 0.0, -sv2]),
        }
    }
    fn chart(&self) -> ([f64; 2], [f64; 2]) {
        ([-self.half, self.half], [-self.half, self.half])
    }
}

struct EnneperPatch {
    r: f64,
}

impl Parametrization for EnneperPatch {
    fn jet(&self, u: f64, v: f64) -> ParamJet {
        ParamJet {
            x: VecN::new(&[u - u * u * u / 3.0 + u * v * v, v - v * v * v / 3.0 + u * u * v, u * u - v * v]),
            xu: VecN::new(&[1.0 - u * u + v * v, 2.0 * u * v, 2.0 * u]),
            xv: VecN::new(&[2.0 * u * v, 1.0 - v * v + u * u, -2.0 * v]),
            xuu: VecN::new(&[-2.0 * u, 2.0 * v, 2.0]),
            xuv: VecN::new(&[2.0 * v, 2.0 * u, 0.0]),
            xvv: VecN::new(&[2.0 * u, -2.0 * v, -2.0]),
        }
    }
    fn chart(&self) -> ([f64; 2], [f64; 2]) {
        ([-self.r, self.r], [-self.r, self.r])
    }
}

struct SpherePatch {
    r: f64,
}

impl Parametrization for SpherePatch {
    fn jet(&self, u: f64, v: f64) -> ParamJet {
        let r = self.r;
        let (su, cu) = u.sin_cos();
        let (sv, cv) = v.sin_cos();
        ParamJet {
            x: VecN::new(&[r * sv * cu, r * sv * su, r * cv]),
            xu: VecN::new(&[-r * sv * su, r * sv * cu, 0.0]),
            xv: VecN::new(&[r * cv * cu, r * cv * su, -r * sv]),
            xuu: VecN::new(&[-r * sv * cu, -r * sv * su, 0.0]),
            xuv: VecN::new(&[-r * cv * su, r * cv * cu, 0.0]),
            xvv: VecN::new(&[-r * sv * cu, -r * sv * su, -r * cv]),
        }
    }
    fn chart(&self) -> ([f64; 2], [f64; 2]) {
        ([0.0, 2.0 * PI], [0.05, PI - 0.05])
    }
}

const SEED_RNG: u64 = 0x5eed_1a77_1ce5;

impl CatalogEntry {
    /// Builds an entry; `extent` bounds the sampled region of unbounded
    /// surfaces and is ignored for the sphere.
    pub fn new(kind: SurfaceKind, extent: f64) -> Result<Self> {
        let n = kind.dim();
        if !(2..=MAX_DIM).contains(&n) {
            return Err(Error::Dimension(n));
        }
        if !(extent > 0.0 && extent.is_finite()) {
            return Err(Error::invalid("extent", format!("must be positive, got {extent}")));
        }
        let positive = |name, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be positive, got {x}")))
            }
        };
        match kind {
            SurfaceKind::Sphere { radius, .. } | SurfaceKind::Cylinder { radius, .. } => positive("radius", radius)?,
            SurfaceKind::Slab { half_width, .. } => positive("half_width", half_width)?,
            SurfaceKind::Catenoid { scale } => positive("scale", scale)?,
            SurfaceKind::Enneper { radius } => positive("radius", radius)?,
            _ => {}
        }
        if matches!(kind, SurfaceKind::Cylinder { n, .. } if n < 3) {
            return Err(Error::invalid("n", "cylinder needs n >= 3"));
        }
        if matches!(kind, SurfaceKind::Scherk) && extent > 6.0 {
            return Err(Error::invalid("extent", "scherk extent must be at most 6"));
        }
        let param: Option<Arc<dyn Parametrization>> = match kind {
            SurfaceKind::Catenoid { scale } => Some(Arc::new(CatenoidPatch { a: scale, vmax: extent / scale })),
            SurfaceKind::Helicoid => Some(Arc::new(HelicoidPatch { umax: extent.asinh(), vmax: extent })),
            SurfaceKind::Scherk => Some(Arc::new(ScherkPatch { half: scherk_half(extent) })),
            SurfaceKind::Enneper { radius } => Some(Arc::new(EnneperPatch { r: radius })),
            SurfaceKind::Sphere { n: 3, radius } => Some(Arc::new(SpherePatch { r: radius })),
            _ => None,
        };
        let mut entry = CatalogEntry { kind, extent, domain: None, param };
        if !matches!(kind, SurfaceKind::Enneper { .. }) {
            let d = ImplicitDomain::new(kind.name(), Arc::new(Field(kind)));
            entry.domain = Some(entry.seeded(d));
        }
        Ok(entry)
    }

    fn seeded(&self, d: ImplicitDomain) -> ImplicitDomain {
        let l = self.extent;
        match self.kind {
            SurfaceKind::Plane { .. } | SurfaceKind::Slab { .. } | SurfaceKind::Cylinder { .. } | SurfaceKind::Sphere { .. } => {
                let mut rng = ChaCha8Rng::seed_from_u64(SEED_RNG);
                let count = match self.kind {
                    SurfaceKind::Sphere { n, .. } => 120 * n,
                    _ => 800,
                };
                let seeds = self.sample_region(count, l + 2.0, &mut rng);
                let scale = match self.kind {
                    SurfaceKind::Sphere { radius, .. } | SurfaceKind::Cylinder { radius, .. } => radius,
                    SurfaceKind::Slab { half_width, .. } => half_width,
                    _ => 1.0,
                };
                d.with_scale(scale).with_seeds(seeds)
            }
            SurfaceKind::Catenoid { scale: a } => {
                let zmax = l + a;
                let r = a * (zmax / a).cosh() + a;
                d.with_scale(a).with_box_seeds(&[-r, -r, -zmax], &[r, r, zmax], &[40, 40, 28])
            }
            SurfaceKind::Helicoid => {
                let r = l + 1.0;
                d.with_box_seeds(&[-r, -r, -r], &[r, r, r], &[32, 32, 32])
            }
            SurfaceKind::Scherk => {
                let h = 1.5 * PI;
                let z = l + 1.0;
                d.with_box_seeds(&[-h, -h, -z], &[h, h, z], &[36, 36, 24])
            }
            SurfaceKind::Enneper { .. } => d,
        }
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// The implicit domain. Enneper's surface is parametric only.
    pub fn domain(&self) -> Result<&ImplicitDomain> {
        self.domain
            .as_ref()
            .ok_or_else(|| Error::invalid("surface", format!("{} has no implicit form", self.name())))
    }

    pub fn parametrization(&self) -> Option<&Arc<dyn Parametrization>> {
        self.param.as_ref()
    }

    /// Reach of the full surface where it is known in closed form.
    pub fn known_reach(&self) -> Option<f64> {
        match self.kind {
            SurfaceKind::Plane { .. } => Some(f64::INFINITY),
            SurfaceKind::Sphere { radius, .. } | SurfaceKind::Cylinder { radius, .. } => Some(radius),
            SurfaceKind::Slab { half_width, .. } => Some(half_width),
            SurfaceKind::Catenoid { scale } => Some(scale),
            SurfaceKind::Helicoid => Some(1.0),
            _ => None,
        }
    }

    /// Closed-form principal curvatures at a boundary point, ascending.
    pub fn analytic_curvatures(&self, p: &VecN) -> Option<Vec<f64>> {
        let n = self.dim();
        match self.kind {
            SurfaceKind::Plane { .. } | SurfaceKind::Slab { .. } => Some(vec![0.0; n - 1]),
            SurfaceKind::Sphere { radius, .. } => Some(vec![1.0 / radius; n - 1]),
            SurfaceKind::Cylinder { radius, .. } => {
                let mut v = vec![0.0; n - 1];
                v[n - 2] = 1.0 / radius;
                Some(v)
            }
            SurfaceKind::Catenoid { scale: a } => {
                let k = 1.0 / (a * (p[2] / a).cosh().powi(2));
                Some(vec![-k, k])
            }
            SurfaceKind::Helicoid => {
                let k = 1.0 / (1.0 + p[0] * p[0] + p[1] * p[1]);
                Some(vec![-k, k])
            }
            _ => None,
        }
    }

    /// Curvatures of the parametrization at `(u, v)` from the fundamental
    /// forms, oriented by the implicit inner normal when there is one.
    pub fn parametric_curvatures(&self, u: f64, v: f64) -> Result<(VecN, [f64; 2])> {
        let param = self
            .param
            .as_ref()
            .ok_or_else(|| Error::invalid("surface", format!("{} has no parametrization", self.name())))?;
        let j = param.jet(u, v);
        let inner = self.domain.as_ref().map(|d| -d.gradient(&j.x));
        Ok((j.x, parametric_curvatures(&j, inner.as_ref())?))
    }

    /// Random boundary points in the sampled region.
    pub fn boundary_samples<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<VecN> {
        self.sample_region(count, self.extent, rng)
    }

    fn sample_region<R: Rng + ?Sized>(&self, count: usize, l: f64, rng: &mut R) -> Vec<VecN> {
        let n = self.dim();
        let mut uni = |a: f64, b: f64| a + (b - a) * rng.random::<f64>();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let p = match self.kind {
                SurfaceKind::Plane { .. } => VecN::from_fn(n, |i| if i + 1 == n { 0.0 } else { uni(-l, l) }),
                SurfaceKind::Slab { half_width, .. } => {
                    let side = if uni(0.0, 1.0) < 0.5 { -half_width } else { half_width };
                    VecN::from_fn(n, |i| if i + 1 == n { side } else { uni(-l, l) })
                }
                SurfaceKind::Cylinder { radius, .. } => {
                    let t = uni(0.0, 2.0 * PI);
                    VecN::from_fn(n, |i| match i {
                        0 => radius * t.cos(),
                        1 => radius * t.sin(),
                        _ => uni(-l, l),
                    })
                }
                SurfaceKind::Sphere { radius, .. } => {
                    let g = loop {
                        let g = VecN::from_fn(n, |_| rng_normal(&mut uni));
                        if g.norm() > 1e-3 {
                            break g;
                        }
                    };
                    g * (radius / g.norm())
                }
                SurfaceKind::Catenoid { scale: a } => {
                    let (u, v) = (uni(0.0, 2.0 * PI), uni(-l / a, l / a));
                    let c = a * v.cosh();
                    VecN::new(&[c * u.cos(), c * u.sin(), a * v])
                }
                SurfaceKind::Helicoid => {
                    let (u, v) = (uni(-l.asinh(), l.asinh()), uni(-l, l));
                    VecN::new(&[u.sinh() * v.cos(), u.sinh() * v.sin(), v])
                }
                SurfaceKind::Scherk => {
                    let h = scherk_half(l);
                    let (x, y) = (uni(-h, h), uni(-h, h));
                    let z = (y.cos() / x.cos()).ln();
                    if z.abs() > l {
                        continue;
                    }
                    VecN::new(&[x, y, z])
                }
                SurfaceKind::Enneper { radius } => {
                    let (u, v) = (uni(-radius, radius), uni(-radius, radius));
                    EnneperPatch { r: radius }.jet(u, v).x
                }
            };
            out.push(p);
        }
        out
    }
}

/// Half-width of the Scherk parameter square that contains `|z| ≤ l`.
fn scherk_half(l: f64) -> f64 {
    // z = ln(cos y / cos x) reaches l at x = acos(e^{-l}) when y = 0
    (-l).exp().acos().min(FRAC_PI_2 - 1e-6)
}

fn rng_normal(uni: &mut impl FnMut(f64, f64) -> f64) -> f64 {
    // Box-Muller from the shared uniform source keeps one RNG stream.
    let u1 = uni(f64::MIN_POSITIVE, 1.0);
    let u2 = uni(0.0, 1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}
