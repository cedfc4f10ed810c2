use super::ImplicitDomain;
use crate::numkit::{gram_schmidt, sym_eigen, SymMat, VecN};
use crate::{Error, Exec, Result};

/// A boundary point with its inner unit normal and principal data.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub position: VecN,
    pub inner_normal: VecN,
    /// Ascending, inner-side sign convention (the unit sphere has all `+1`).
    pub curvatures: Vec<f64>,
    /// Orthonormal principal directions, one per curvature.
    pub directions: Vec<VecN>,
}

impl SurfacePoint {
    pub fn dim(&self) -> usize {
        self.position.dim()
    }

    /// Outward unit normal, i.e. `∇δ` at the point.
    pub fn outer_normal(&self) -> VecN {
        -self.inner_normal
    }
}

/// Orthonormal basis of `normal^⊥`, built deterministically by Gram-Schmidt on
/// the coordinate axes ordered by increasing alignment with the normal.
pub fn tangent_frame(normal: &VecN) -> Vec<VecN> {
    let n = normal.dim();
    let mut axes: Vec<usize> = (0..n).collect();
    axes.sort_by(|&a, &b| normal[a].abs().total_cmp(&normal[b].abs()).then(a.cmp(&b)));
    let mut vs = vec![*normal];
    vs.extend(axes.iter().map(|&i| VecN::basis(n, i)));
    let mut q = gram_schmidt(&vs, 1e-10);
    q.remove(0);
    q.truncate(n - 1);
    q
}

/// Principal curvatures of `bΩ` at `p` from the projected Hessian of `φ`.
///
/// The shape operator is `P Hess φ P / |∇φ|` restricted to the tangent space,
/// which makes boundaries of convex domains positively curved.
pub fn principal_curvatures(domain: &ImplicitDomain, p: &VecN) -> Result<SurfacePoint> {
    if p.dim() != domain.dim() {
        return Err(Error::DimMismatch { expected: domain.dim(), got: p.dim() });
    }
    let g = domain.gradient(p);
    let gn = g.norm();
    if gn < 1e-8 || !gn.is_finite() {
        return Err(Error::SingularPoint { point: p.to_vec(), gradient_norm: gn });
    }
    let residual = domain.phi(p).abs() / gn;
    if residual > 1e-8 * domain.scale() {
        return Err(Error::NotOnBoundary { point: p.to_vec(), residual });
    }
    let inner = g * (-1.0 / gn);
    let n = p.dim();
    if n == 1 {
        return Ok(SurfacePoint { position: *p, inner_normal: inner, curvatures: vec![], directions: vec![] });
    }
    let frame = tangent_frame(&inner);
    let h = domain.hessian(p);
    let mut s = SymMat::zeros(n - 1);
    for i in 0..n - 1 {
        for j in i..n - 1 {
            s.set(i, j, h.quad(&frame[i], &frame[j]) / gn);
        }
    }
    let eig = sym_eigen(&s)?;
    let directions = eig
        .vectors
        .iter()
        .map(|w| {
            let mut d = VecN::zeros(n);
            for (k, t) in frame.iter().enumerate() {
                d += *t * w[k];
            }
            d
        })
        .collect();
    Ok(SurfacePoint { position: *p, inner_normal: inner, curvatures: eig.values, directions })
}

fn check_m(sp: &SurfacePoint, m: usize) -> Result<()> {
    let max = sp.curvatures.len();
    if m == 0 || m > max {
        return Err(Error::MOutOfRange { m, max });
    }
    Ok(())
}

/// `ν₁ + … + ν_m`; nonnegative iff the boundary is m-convex at the point.
pub fn m_convexity_defect(sp: &SurfacePoint, m: usize) -> Result<f64> {
    check_m(sp, m)?;
    Ok(sp.curvatures[..m].iter().sum())
}

/// True iff `|ν_j| ≤ tol` for `j = 1..m`.
pub fn is_m_flat(sp: &SurfacePoint, m: usize, tol: f64) -> Result<bool> {
    check_m(sp, m)?;
    Ok(sp.curvatures[..m].iter().all(|v| v.abs() <= tol))
}

/// `1e-6 · max(1, max |ν|)` over the given points.
pub fn default_flatness_tol(points: &[SurfacePoint]) -> f64 {
    let kmax = points.iter().flat_map(|p| p.curvatures.iter()).fold(1.0_f64, |m, v| m.max(v.abs()));
    1e-6 * kmax
}

/// Sampled m-flatness evidence. This cannot certify that the m-flat set has
/// bounded relative interior; `qualifier` says so.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessReport {
    pub m: usize,
    pub tol: f64,
    pub total: usize,
    pub flat: Vec<VecN>,
    pub bounding_box: Option<(VecN, VecN)>,
    pub radius: f64,
    pub outside_radius: usize,
    pub flat_outside_radius: usize,
    pub qualifier: &'static str,
}

impl FlatnessReport {
    pub fn flat_fraction(&self) -> f64 {
        self.flat.len() as f64 / self.total as f64
    }

    /// Fraction of samples beyond `radius` that are m-flat; `None` if no
    /// sample lies beyond it.
    pub fn flat_fraction_outside(&self) -> Option<f64> {
        (self.outside_radius > 0).then(|| self.flat_outside_radius as f64 / self.outside_radius as f64)
    }
}

/// Classifies boundary samples as m-flat or not. `tol = None` selects
/// [`default_flatness_tol`].
pub fn m_flatness_report(
    domain: &ImplicitDomain,
    samples: &[VecN],
    m: usize,
    tol: Option<f64>,
    radius: f64,
    exec: Exec,
) -> Result<FlatnessReport> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let points = exec.try_map(samples, |p| principal_curvatures(domain, p))?;
    let tol = tol.unwrap_or_else(|| default_flatness_tol(&points));
    let mut flat = Vec::new();
    let mut outside = 0;
    let mut flat_outside = 0;
    for sp in &points {
        let f = is_m_flat(sp, m, tol)?;
        let out = sp.position.norm() > radius;
        outside += out as usize;
        if f {
            flat.push(sp.position);
            flat_outside += out as usize;
        }
    }
    let bounding_box = flat.first().map(|first| {
        let mut lo = *first;
        let mut hi = *first;
        for p in &flat {
            for i in 0..p.dim() {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        (lo, hi)
    });
    Ok(FlatnessReport {
        m,
        tol,
        total: points.len(),
        flat,
        bounding_box,
        radius,
        outside_radius: outside,
        flat_outside_radius: flat_outside,
        qualifier: "sampled evidence only",
    })
}
