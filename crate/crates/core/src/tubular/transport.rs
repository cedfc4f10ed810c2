use super::projection::{signed_distance_with, ProjectionResult, ProjectionSettings};
use crate::numkit::{SymMat, VecN};
use crate::surfaces::{principal_curvatures, ImplicitDomain, SurfacePoint};
use crate::{Error, Result};

/// Curvatures of the parallel hypersurface through `p + t ∇δ(p)`:
/// `ν_j / (1 + t ν_j)`. Order and signs are preserved.
pub fn transport_curvatures(sp: &SurfacePoint, t: f64) -> Result<Vec<f64>> {
    sp.curvatures
        .iter()
        .map(|&nu| {
            let den = 1.0 + t * nu;
            if den <= 0.0 {
                Err(Error::FocalPoint { denominator: den })
            } else {
                Ok(nu / den)
            }
        })
        .collect()
}

/// First and second derivatives of `δ` at a point with a unique foot.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceJet {
    pub projection: ProjectionResult,
    pub surface: SurfacePoint,
    /// `∇δ`, the outward unit normal at the foot.
    pub gradient: VecN,
    /// `ν_j(x)`, ascending.
    pub transported: Vec<f64>,
    pub hessian: SymMat,
}

impl DistanceJet {
    pub fn delta(&self) -> f64 {
        self.projection.delta
    }
}

pub fn distance_jet(domain: &ImplicitDomain, x: &VecN) -> Result<DistanceJet> {
    distance_jet_with(domain, x, &ProjectionSettings::default())
}

pub fn distance_jet_with(domain: &ImplicitDomain, x: &VecN, s: &ProjectionSettings) -> Result<DistanceJet> {
    let pr = signed_distance_with(domain, x, s)?;
    if pr.multiplicity > 1 {
        return Err(Error::NonUniqueFoot { point: x.to_vec(), multiplicity: pr.multiplicity });
    }
    jet_from_projection(domain, pr)
}

pub fn jet_from_projection(domain: &ImplicitDomain, pr: ProjectionResult) -> Result<DistanceJet> {
    let sp = principal_curvatures(domain, &pr.foot)?;
    let transported = transport_curvatures(&sp, pr.delta)?;
    let mut hessian = SymMat::zeros(sp.dim());
    for (nu, d) in transported.iter().zip(&sp.directions) {
        hessian = hessian.add_scaled(*nu, &SymMat::outer(d));
    }
    Ok(DistanceJet { projection: pr, gradient: sp.outer_normal(), transported, hessian, surface: sp })
}

/// `∇δ(x)`; requires a unique foot.
pub fn grad_delta(domain: &ImplicitDomain, x: &VecN) -> Result<VecN> {
    Ok(distance_jet(domain, x)?.gradient)
}

/// `Hess δ(x) = Σ ν_j(x) v_j v_jᵀ`; its kernel contains `∇δ(x)`.
pub fn hessian_delta(domain: &ImplicitDomain, x: &VecN) -> Result<SymMat> {
    Ok(distance_jet(domain, x)?.hessian)
}
