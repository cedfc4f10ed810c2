//! Upper bounds for the minimal pseudometric
//! `g_Ω(p, v) = inf{1/r : f conformal harmonic, f(0) = p, f_x(0) = r v}`,
//! the Klein-model oracle on the ball, the degenerate domain `Ω_D`, and the
//! 2-plane classifier for intersections of halfspaces.

mod convex;
mod metric;
mod omega_d;

pub use convex::{
    convex_contains_2plane, random_plane_trials, ConvexClassification, HalfspaceIntersection, PlaneWitness,
    TrialReport,
};
pub use metric::{bck_metric, metric_upper_bound, DiscSearchSpec, MetricEstimate};
pub use omega_d::{
    omega_d_distance_chain, omega_d_membership, third_coordinate_check, vertical_disc_radius, ChainBound, OmegaD,
    ThirdCoordinateCheck,
};
