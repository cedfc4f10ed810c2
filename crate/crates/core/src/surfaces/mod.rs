//! Hypersurfaces `M = bΩ` given implicitly by `Ω = {φ < 0}`, their principal
//! curvatures, and the m-convexity / m-flatness classifiers.

mod catalog;
mod curvature;
mod domain;
mod parametric;

pub use catalog::{CatalogEntry, SurfaceKind};
pub use curvature::{
    default_flatness_tol, is_m_flat, m_convexity_defect, m_flatness_report, principal_curvatures,
    tangent_frame, FlatnessReport, SurfacePoint,
};
pub use domain::{DefiningFunction, ImplicitDomain};
pub use parametric::{parametric_curvatures, ParamJet, Parametrization};
