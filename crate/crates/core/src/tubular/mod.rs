//! Signed distance to `M`, nearest-point projection, curvature transport
//! along normals and reach estimation.
//!
//! Sign convention: `δ < 0` inside `Ω` and `∇δ` is the outward normal at the
//! foot point.

mod bounds;
mod collar;
mod projection;
mod reach;
mod transport;

pub use bounds::{curvature_bounds_check, BoundKind, BoundViolation, BoundsReport};
pub use collar::{collar_samples, CollarSample, TubularCollar};
pub use projection::{signed_distance, signed_distance_with, ProjectionResult, ProjectionSettings};
pub use reach::{reach_estimate, ReachEstimate, ReachSettings};
pub use transport::{
    distance_jet, distance_jet_with, grad_delta, hessian_delta, jet_from_projection, transport_curvatures, DistanceJet,
};

/// Qualifier carried by every reach or bounds report: the checks only see
/// the sampled part of the surface.
pub const SAMPLED_REGION_ONLY: &str = "sampled region only";
