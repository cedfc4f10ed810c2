//! The m-plurisubharmonic defining function `ρ = c·χ(ρ₀)` built from the
//! signed distance, and its verification.
//!
//! * `h(t) = (e^{αt} - 1)/α` is the convex profile with `ḧ > (m-1)/ε` on the
//!   collar `[-ε₀′, 0]`;
//! * `ρ₀ = h∘δ` on the collar `C_{ε₀}` and the constant `h(-ε₀)` beyond it;
//! * `χ` flattens `ρ₀` below `h(-ε₂)` and is the identity above `h(-ε₁)`;
//! * `c = -1/h(-ε₁)` normalises the level `{δ = -ε₁}` to `ρ = -1`.

mod cap;
mod function;
mod profile;
mod verify;

pub use cap::{make_cap, Cap, SmoothingCap};
pub use function::{build_barrier, rho0, BarrierFunction, BarrierJet, BarrierOptions, Region};
pub use profile::{choose_collar, default_alpha, make_profile, CollarRatios, ConvexProfile};
pub use verify::{fd_eigen_check, verify_barrier, CheckSummary, VerificationReport, VerifySpec};
