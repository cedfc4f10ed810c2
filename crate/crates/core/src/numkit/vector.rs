use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use super::MAX_DIM;
use crate::{Error, Result};

/// Fixed-capacity real vector of dimension `1..=MAX_DIM`.
#[derive(Clone, Copy, PartialEq)]
pub struct VecN {
    dim: usize,
    c: [f64; MAX_DIM],
}

impl VecN {
    /// # Panics
    /// If `dim` is zero or exceeds [`MAX_DIM`].
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension {dim} outside 1..={MAX_DIM}");
        VecN { dim, c: [0.0; MAX_DIM] }
    }

    pub fn try_from_slice(xs: &[f64]) -> Result<Self> {
        if xs.is_empty() || xs.len() > MAX_DIM {
            return Err(Error::Dimension(xs.len()));
        }
        let mut v = VecN { dim: xs.len(), c: [0.0; MAX_DIM] };
        v.c[..xs.len()].copy_from_slice(xs);
        Ok(v)
    }

    /// # Panics
    /// If the slice length is zero or exceeds [`MAX_DIM`].
    pub fn new(xs: &[f64]) -> Self {
        Self::try_from_slice(xs).expect("vector dimension")
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize) -> f64) -> Self {
        let mut v = Self::zeros(dim);
        for i in 0..dim {
            v.c[i] = f(i);
        }
        v
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.c[i] = 1.0;
        v
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.c[..self.dim]
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.c[..self.dim]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.as_slice().to_vec()
    }

    #[inline]
    pub fn dot(&self, o: &VecN) -> f64 {
        debug_assert_eq!(self.dim, o.dim);
        self.as_slice().iter().zip(o.as_slice()).map(|(a, b)| a * b).sum()
    }

    #[inline]
    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Unit vector in the same direction, `None` for (numerically) zero input.
    pub fn normalized(&self) -> Option<VecN> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| *self * (1.0 / n))
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|x| x.is_finite())
    }

    pub fn dist(&self, o: &VecN) -> f64 {
        (*self - *o).norm()
    }
}

impl fmt::Debug for VecN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.as_slice()).finish()
    }
}

impl Index<usize> for VecN {
    type Output = f64;
    #[inline]
    fn index(&self, i: usize) -> &f64 {
        &self.as_slice()[i]
    }
}

impl IndexMut<usize> for VecN {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.as_mut_slice()[i]
    }
}

impl Add for VecN {
    type Output = VecN;
    #[inline]
    fn add(mut self, o: VecN) -> VecN {
        self += o;
        self
    }
}

impl AddAssign for VecN {
    #[inline]
    fn add_assign(&mut self, o: VecN) {
        debug_assert_eq!(self.dim, o.dim);
        for i in 0..self.dim {
            self.c[i] += o.c[i];
        }
    }
}

impl Sub for VecN {
    type Output = VecN;
    #[inline]
    fn sub(mut self, o: VecN) -> VecN {
        self -= o;
        self
    }
}

impl SubAssign for VecN {
    #[inline]
    fn sub_assign(&mut self, o: VecN) {
        debug_assert_eq!(self.dim, o.dim);
        for i in 0..self.dim {
            self.c[i] -= o.c[i];
        }
    }
}

impl Mul<f64> for VecN {
    type Output = VecN;
    #[inline]
    fn mul(mut self, s: f64) -> VecN {
        for x in self.as_mut_slice() {
            *x *= s;
        }
        self
    }
}

impl Mul<VecN> for f64 {
    type Output = VecN;
    #[inline]
    fn mul(self, v: VecN) -> VecN {
        v * self
    }
}

impl Neg for VecN {
    type Output = VecN;
    #[inline]
    fn neg(self) -> VecN {
        self * -1.0
    }
}

/// Orthonormalizes `vs` in order, dropping vectors that are (numerically)
/// dependent on their predecessors.
pub fn gram_schmidt(vs: &[VecN], tol: f64) -> Vec<VecN> {
    let mut out: Vec<VecN> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = *v;
        // two passes for stability
        for _ in 0..2 {
            for q in &out {
                w -= *q * q.dot(&w);
            }
        }
        let n = w.norm();
        if n > tol * (1.0 + v.norm()) {
            out.push(w * (1.0 / n));
        }
    }
    out
}
