//! Smooth m-plurisubharmonic defining functions for bounded-geometry
//! m-convex domains, together with the numerical machinery needed to check
//! them: signed-distance collars, curvature transport, conformal harmonic
//! probes and upper bounds on the Kobayashi-type minimal pseudometric.
//!
//! The pipeline is
//!
//! ```text
//! surfaces -> tubular -> barrier -> (mpsh, discs) -> hyperbolicity
//! ```
//!
//! and every stage operates on small dense vectors ([`VecN`]) of dimension at
//! most [`numkit::MAX_DIM`].
//!
//! Data-parallel sweeps go through [`Exec`]; with the default `parallel`
//! feature they run on rayon, otherwise they run sequentially with identical
//! results.

#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod barrier;
pub mod discs;
mod error;
pub mod exec;
pub mod hyperbolicity;
pub mod mpsh;
pub mod numkit;
pub mod surfaces;
pub mod tubular;

pub use error::{Error, Result};
pub use exec::Exec;
pub use numkit::{SymMat, VecN};
