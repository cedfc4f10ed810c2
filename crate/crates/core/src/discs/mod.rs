//! Conformal harmonic maps from planar parameter domains, their residual
//! diagnostics, and the Laplacian of `ρ∘f`.
//!
//! For a conformal harmonic `f` and a `C²` function `ρ`,
//! `Δ(ρ∘f) = Hess ρ[f_x, f_x] + Hess ρ[f_y, f_y]`, which is `|f_x|²` times the
//! trace of `Hess ρ` on the tangent plane of the image.

mod map;
mod quadrature;
mod sweep;
mod weierstrass;

pub use map::{
    conformality_residual, harmonicity_residual, AffineDisc, CatenoidMap, ConformalMap, FnMap, HelicoidMap, Jet,
    ParamDomain, Similarity,
};
pub use quadrature::gauss_legendre;
pub use sweep::{composition_laplacian, composition_laplacian_fd, subharmonicity_sweep, SweepGrid, SweepReport};
pub use weierstrass::{PathKind, WeierstrassEntry, WeierstrassMap};
