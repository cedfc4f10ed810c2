use std::f64::consts::PI;
use std::sync::Arc;

use crate::numkit::VecN;
use crate::{Error, Result};

/// Value and first/second partial derivatives at `z = x + iy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub value: VecN,
    pub fx: VecN,
    pub fy: VecN,
    pub fxx: VecN,
    pub fxy: VecN,
    pub fyy: VecN,
}

impl Jet {
    pub fn laplacian(&self) -> VecN {
        self.fxx + self.fyy
    }
}

/// Parameter domain in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamDomain {
    Disc { center: [f64; 2], radius: f64 },
    Rect { lo: [f64; 2], hi: [f64; 2] },
    /// Centred at the origin.
    Annulus { inner: f64, outer: f64 },
}

impl ParamDomain {
    pub fn contains(&self, z: [f64; 2]) -> bool {
        match *self {
            ParamDomain::Disc { center, radius } => (z[0] - center[0]).hypot(z[1] - center[1]) <= radius,
            ParamDomain::Rect { lo, hi } => (lo[0]..=hi[0]).contains(&z[0]) && (lo[1]..=hi[1]).contains(&z[1]),
            ParamDomain::Annulus { inner, outer } => (inner..=outer).contains(&z[0].hypot(z[1])),
        }
    }

    /// `n1 × n2` lattice: polar (radii × angles) for discs and annuli,
    /// cell-centred for rectangles.
    pub fn lattice(&self, n1: usize, n2: usize) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(n1 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                let (a, b) = ((i as f64 + 0.5) / n1 as f64, (j as f64 + 0.5) / n2 as f64);
                out.push(match *self {
                    ParamDomain::Disc { center, radius } => {
                        let (r, t) = (radius * a, 2.0 * PI * b);
                        [center[0] + r * t.cos(), center[1] + r * t.sin()]
                    }
                    ParamDomain::Rect { lo, hi } => [lo[0] + (hi[0] - lo[0]) * a, lo[1] + (hi[1] - lo[1]) * b],
                    ParamDomain::Annulus { inner, outer } => {
                        let (r, t) = (inner + (outer - inner) * a, 2.0 * PI * b);
                        [r * t.cos(), r * t.sin()]
                    }
                });
            }
        }
        out
    }
}

/// A map from a planar parameter domain into `R^n` with second-order jets.
pub trait ConformalMap: Send + Sync {
    fn dim(&self) -> usize;
    fn domain(&self) -> ParamDomain;
    fn jet(&self, z: [f64; 2]) -> Result<Jet>;
    /// Points where `f_x = f_y = 0`; residual checks skip a neighbourhood.
    fn branch_points(&self) -> Vec<[f64; 2]> {
        Vec::new()
    }
    fn name(&self) -> String;
}

/// `(f_x·f_y, |f_x|² - |f_y|²)`; both vanish for conformal maps.
pub fn conformality_residual<F: ConformalMap + ?Sized>(f: &F, z: [f64; 2]) -> Result<(f64, f64)> {
    let j = f.jet(z)?;
    Ok((j.fx.dot(&j.fy), j.fx.norm_sq() - j.fy.norm_sq()))
}

/// `Δf(z)` componentwise.
pub fn harmonicity_residual<F: ConformalMap + ?Sized>(f: &F, z: [f64; 2]) -> Result<VecN> {
    Ok(f.jet(z)?.laplacian())
}

/// `f(z) = p + x·u + y·w` on the disc of the given radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineDisc {
    pub origin: VecN,
    pub u: VecN,
    pub w: VecN,
    pub radius: f64,
}

impl AffineDisc {
    pub fn new(origin: VecN, u: VecN, w: VecN, radius: f64) -> Self {
        AffineDisc { origin, u, w, radius }
    }
}

impl ConformalMap for AffineDisc {
    fn dim(&self) -> usize {
        self.origin.dim()
    }
    fn domain(&self) -> ParamDomain {
        ParamDomain::Disc { center: [0.0, 0.0], radius: self.radius }
    }
    fn jet(&self, z: [f64; 2]) -> Result<Jet> {
        let zero = VecN::zeros(self.dim());
        Ok(Jet {
            value: self.origin + self.u * z[0] + self.w * z[1],
            fx: self.u,
            fy: self.w,
            fxx: zero,
            fxy: zero,
            fyy: zero,
        })
    }
    fn name(&self) -> String {
        "affine-disc".into()
    }
}

type PlaneFn = Arc<dyn Fn([f64; 2]) -> VecN + Send + Sync>;

/// Arbitrary closure with finite-difference jets (step `h`).
#[derive(Clone)]
pub struct FnMap {
    dim: usize,
    domain: ParamDomain,
    f: PlaneFn,
    pub h: f64,
    name: String,
}

impl FnMap {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        domain: ParamDomain,
        f: impl Fn([f64; 2]) -> VecN + Send + Sync + 'static,
    ) -> Self {
        FnMap { dim, domain, f: Arc::new(f), h: 1e-4, name: name.into() }
    }
}

impl ConformalMap for FnMap {
    fn dim(&self) -> usize {
        self.dim
    }
    fn domain(&self) -> ParamDomain {
        self.domain
    }
    fn jet(&self, z: [f64; 2]) -> Result<Jet> {
        let h = self.h;
        let f = |dx: f64, dy: f64| (self.f)([z[0] + dx, z[1] + dy]);
        let c = f(0.0, 0.0);
        let (xp, xm, yp, ym) = (f(h, 0.0), f(-h, 0.0), f(0.0, h), f(0.0, -h));
        let j = Jet {
            value: c,
            fx: (xp - xm) * (0.5 / h),
            fy: (yp - ym) * (0.5 / h),
            fxx: (xp - c * 2.0 + xm) * (1.0 / (h * h)),
            fxy: (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) * (0.25 / (h * h)),
            fyy: (yp - c * 2.0 + ym) * (1.0 / (h * h)),
        };
        if !(j.value.is_finite() && j.fxx.is_finite() && j.fyy.is_finite() && j.fxy.is_finite()) {
            return Err(Error::NonFinite { context: "map jet" });
        }
        Ok(j)
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

/// `(sinh u cos v, sinh u sin v, v)` with `z = u + iv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicoidMap {
    pub domain: ParamDomain,
}

impl ConformalMap for HelicoidMap {
    fn dim(&self) -> usize {
        3
    }
    fn domain(&self) -> ParamDomain {
        self.domain
    }
    fn jet(&self, z: [f64; 2]) -> Result<Jet> {
        let (sh, ch) = (z[0].sinh(), z[0].cosh());
        let (s, c) = z[1].sin_cos();
        Ok(Jet {
            value: VecN::new(&[sh * c, sh * s, z[1]]),
            fx: VecN::new(&[ch * c, ch * s, 0.0]),
            fy: VecN::new(&[-sh * s, sh * c, 1.0]),
            fxx: VecN::new(&[sh * c, sh * s, 0.0]),
            fxy: VecN::new(&[-ch * s, ch * c, 0.0]),
            fyy: VecN::new(&[-sh * c, -sh * s, 0.0]),
        })
    }
    fn name(&self) -> String {
        "helicoid".into()
    }
}

/// `(cosh u cos v, cosh u sin v, u)` with `z = u + iv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatenoidMap {
    pub domain: ParamDomain,
}

impl ConformalMap for CatenoidMap {
    fn dim(&self) -> usize {
        3
    }
    fn domain(&self) -> ParamDomain {
        self.domain
    }
    fn jet(&self, z: [f64; 2]) -> Result<Jet> {
        let (sh, ch) = (z[0].sinh(), z[0].cosh());
        let (s, c) = z[1].sin_cos();
        Ok(Jet {
            value: VecN::new(&[ch * c, ch * s, z[0]]),
            fx: VecN::new(&[sh * c, sh * s, 1.0]),
            fy: VecN::new(&[-ch * s, ch * c, 0.0]),
            fxx: VecN::new(&[ch * c, ch * s, 0.0]),
            fxy: VecN::new(&[-sh * s, sh * c, 0.0]),
            fyy: VecN::new(&[-ch * c, -ch * s, 0.0]),
        })
    }
    fn name(&self) -> String {
        "catenoid".into()
    }
}

/// `x ↦ s·Q·f(z) + t` for an orthogonal `Q` (given by rows); preserves
/// conformality and harmonicity.
#[derive(Clone)]
pub struct Similarity {
    pub inner: Arc<dyn ConformalMap>,
    pub scale: f64,
    pub rows: Vec<VecN>,
    pub shift: VecN,
}

impl Similarity {
    pub fn new(inner: Arc<dyn ConformalMap>, scale: f64, rows: Vec<VecN>, shift: VecN) -> Result<Self> {
        let n = inner.dim();
        if rows.len() != n || shift.dim() != n {
            return Err(Error::DimMismatch { expected: n, got: rows.len() });
        }
        let mut defect = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((rows[i].dot(&rows[j]) - want).abs());
            }
        }
        if defect > 1e-10 {
            return Err(Error::NonOrthonormal { defect });
        }
        Ok(Similarity { inner, scale, rows, shift })
    }

    /// Scaling and translation only.
    pub fn scale_shift(inner: Arc<dyn ConformalMap>, scale: f64, shift: VecN) -> Result<Self> {
        let n = inner.dim();
        Self::new(inner, scale, (0..n).map(|i| VecN::basis(n, i)).collect(), shift)
    }

    fn lin(&self, v: &VecN) -> VecN {
        VecN::from_fn(v.dim(), |i| self.scale * self.rows[i].dot(v))
    }
}

impl ConformalMap for Similarity {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn domain(&self) -> ParamDomain {
        self.inner.domain()
    }
    fn jet(&self, z: [f64; 2]) -> Result<Jet> {
        let j = self.inner.jet(z)?;
        Ok(Jet {
            value: self.lin(&j.value) + self.shift,
            fx: self.lin(&j.fx),
            fy: self.lin(&j.fy),
            fxx: self.lin(&j.fxx),
            fxy: self.lin(&j.fxy),
            fyy: self.lin(&j.fyy),
        })
    }
    fn branch_points(&self) -> Vec<[f64; 2]> {
        self.inner.branch_points()
    }
    fn name(&self) -> String {
        self.inner.name()
    }
}
