//! Small dense linear algebra and finite differences.
//!
//! Everything here is sized for ambient dimensions up to [`MAX_DIM`]; vectors
//! and matrices are `Copy` and live on the stack.

mod eigen;
mod fd;
mod linsolve;
mod matrix;
mod vector;

pub use eigen::{sym_eigen, EigenDecomposition};
pub use fd::{default_step, gradient_fd, hessian_fd, FnField, ScalarField};
pub use linsolve::solve_dense;
pub use matrix::SymMat;
pub use vector::{gram_schmidt, VecN};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 8;
