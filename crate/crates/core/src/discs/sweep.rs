use super::map::ConformalMap;
use crate::mpsh::C2Field;
use crate::{Error, Exec, Result};

/// `Δ(ρ∘f)(z) = Hess ρ(f(z))[f_x, f_x] + Hess ρ(f(z))[f_y, f_y]`. Rejects maps
/// whose Laplacian exceeds `1e-6 (1 + |f_x|²)`, where the dropped `∇ρ·Δf`
/// term would matter.
pub fn composition_laplacian<R, F>(rho: &R, f: &F, z: [f64; 2]) -> Result<f64>
where
    R: C2Field + ?Sized,
    F: ConformalMap + ?Sized,
{
    let j = f.jet(z)?;
    if j.value.dim() != rho.dim() {
        return Err(Error::DimMismatch { expected: rho.dim(), got: j.value.dim() });
    }
    let residual = j.laplacian().norm();
    if residual > 1e-6 * (1.0 + j.fx.norm_sq()) {
        return Err(Error::NotHarmonic { z, residual });
    }
    let h = rho.hessian(&j.value).map_err(|e| match e {
        Error::OutsideDomain { .. } => Error::OutsideDomain { point: j.value.to_vec() },
        other => other,
    })?;
    Ok(h.quad(&j.fx, &j.fx) + h.quad(&j.fy, &j.fy))
}

/// Five-point finite-difference Laplacian of `z ↦ ρ(f(z))`.
pub fn composition_laplacian_fd<R, F>(rho: &R, f: &F, z: [f64; 2], step: f64) -> Result<f64>
where
    R: C2Field + ?Sized,
    F: ConformalMap + ?Sized,
{
    let v = |dx: f64, dy: f64| -> Result<f64> { rho.value(&f.jet([z[0] + dx, z[1] + dy])?.value) };
    let c = v(0.0, 0.0)?;
    Ok((v(step, 0.0)? + v(-step, 0.0)? + v(0.0, step)? + v(0.0, -step)? - 4.0 * c) / (step * step))
}

/// Parameter lattice resolution; see [`super::ParamDomain::lattice`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepGrid {
    pub n1: usize,
    pub n2: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub map: String,
    pub samples: usize,
    /// Lattice points within `1e-3` of a branch point.
    pub skipped: usize,
    pub min_laplacian: f64,
    pub min_at: Option<[f64; 2]>,
    /// Points with `Δ(ρ∘f) < -tol`, at most 32.
    pub violations: Vec<([f64; 2], f64)>,
    pub violation_count: usize,
    /// Range of `ρ∘f` over the lattice.
    pub rho_range: (f64, f64),
    pub max_conformality_residual: f64,
    pub max_harmonicity_residual: f64,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.samples > 0
    }
}

pub fn subharmonicity_sweep<R, F>(rho: &R, f: &F, grid: SweepGrid, tol: f64, exec: Exec) -> Result<SweepReport>
where
    R: C2Field + ?Sized,
    F: ConformalMap + ?Sized,
{
    let branch = f.branch_points();
    let all = f.domain().lattice(grid.n1, grid.n2);
    let pts: Vec<[f64; 2]> = all
        .iter()
        .filter(|z| branch.iter().all(|b| (z[0] - b[0]).hypot(z[1] - b[1]) > 1e-3))
        .copied()
        .collect();
    if pts.is_empty() {
        return Err(Error::EmptySamples);
    }
    let vals = exec.try_map(&pts, |z| {
        let j = f.jet(*z)?;
        let lap = composition_laplacian(rho, f, *z)?;
        let r = rho.value(&j.value)?;
        let scale = j.fx.norm_sq().max(f64::MIN_POSITIVE);
        let conf = j.fx.dot(&j.fy).abs().max((j.fx.norm_sq() - j.fy.norm_sq()).abs()) / scale;
        Ok((lap, r, conf, j.laplacian().norm()))
    })?;
    let mut rep = SweepReport {
        map: f.name(),
        samples: pts.len(),
        skipped: all.len() - pts.len(),
        min_laplacian: f64::INFINITY,
        min_at: None,
        violations: Vec::new(),
        violation_count: 0,
        rho_range: (f64::INFINITY, f64::NEG_INFINITY),
        max_conformality_residual: 0.0,
        max_harmonicity_residual: 0.0,
    };
    for (z, (lap, r, conf, harm)) in pts.iter().zip(&vals) {
        if *lap < rep.min_laplacian {
            rep.min_laplacian = *lap;
            rep.min_at = Some(*z);
        }
        if *lap < -tol {
            rep.violation_count += 1;
            if rep.violations.len() < 32 {
                rep.violations.push((*z, *lap));
            }
        }
        rep.rho_range = (rep.rho_range.0.min(*r), rep.rho_range.1.max(*r));
        rep.max_conformality_residual = rep.max_conformality_residual.max(*conf);
        rep.max_harmonicity_residual = rep.max_harmonicity_residual.max(*harm);
    }
    Ok(rep)
}
