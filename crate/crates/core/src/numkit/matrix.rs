use std::fmt;

use super::{VecN, MAX_DIM};
use crate::{Error, Result};

/// Symmetric `dim x dim` matrix. Both triangles are stored and kept equal by
/// every mutating method.
#[derive(Clone, Copy, PartialEq)]
pub struct SymMat {
    dim: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl SymMat {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} outside 1..={MAX_DIM}");
        SymMat { dim, a: [[0.0; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.a[i][i] = 1.0;
        }
        m
    }

    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            m.a[i][i] = *x;
        }
        m
    }

    /// Builds a matrix from rows, rejecting input whose asymmetry exceeds
    /// `1e-12 * (1 + max|a_ij|)`. The stored matrix is the symmetric part.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::Dimension(n));
        }
        let mut m = Self::zeros(n);
        let mut asym = 0.0_f64;
        let mut scale = 0.0_f64;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimMismatch { expected: n, got: r.len() });
            }
            for (j, x) in r.iter().enumerate() {
                if !x.is_finite() {
                    return Err(Error::NonFinite { context: "matrix entry" });
                }
                scale = scale.max(x.abs());
                asym = asym.max((x - rows[j][i]).abs());
            }
        }
        if asym > 1e-12 * (1.0 + scale) {
            return Err(Error::Asymmetric { magnitude: asym });
        }
        for i in 0..n {
            for j in 0..n {
                m.a[i][j] = 0.5 * (rows[i][j] + rows[j][i]);
            }
        }
        Ok(m)
    }

    /// `v v^T`.
    pub fn outer(v: &VecN) -> Self {
        let mut m = Self::zeros(v.dim());
        for i in 0..v.dim() {
            for j in 0..v.dim() {
                m.a[i][j] = v[i] * v[j];
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.dim && j < self.dim);
        self.a[i][j]
    }

    /// Sets entries `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        debug_assert!(i < self.dim && j < self.dim);
        self.a[i][j] = x;
        self.a[j][i] = x;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim).map(|i| self.a[i][..self.dim].to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &VecN) -> VecN {
        debug_assert_eq!(self.dim, v.dim());
        VecN::from_fn(self.dim, |i| (0..self.dim).map(|j| self.a[i][j] * v[j]).sum())
    }

    /// Bilinear form `u^T A w`.
    pub fn quad(&self, u: &VecN, w: &VecN) -> f64 {
        u.dot(&self.mul_vec(w))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.a[i][i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max(self.a[i][j].abs());
            }
        }
        m
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += self.a[i][j] * self.a[i][j];
            }
        }
        s.sqrt()
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim).all(|i| self.a[i][..self.dim].iter().all(|x| x.is_finite()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.a[i][j] *= s;
            }
        }
        m
    }

    pub fn add(&self, o: &SymMat) -> Self {
        debug_assert_eq!(self.dim, o.dim);
        let mut m = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.a[i][j] += o.a[i][j];
            }
        }
        m
    }

    /// `self + s * o`.
    pub fn add_scaled(&self, s: f64, o: &SymMat) -> Self {
        self.add(&o.scaled(s))
    }

    pub(crate) fn raw(&self) -> &[[f64; MAX_DIM]; MAX_DIM] {
        &self.a
    }
}

impl fmt::Debug for SymMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}
