use super::{SymMat, VecN};
use crate::{Error, Result};

/// A real function on a subset of `R^n` whose evaluation may fail.
pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &VecN) -> Result<f64>;
}

/// Wraps a closure as an infallible [`ScalarField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&VecN) -> f64 + Send + Sync> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F: Fn(&VecN) -> f64 + Send + Sync> ScalarField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &VecN) -> Result<f64> {
        Ok((self.f)(x))
    }
}

/// `1e-4 * (1 + |x|)`.
pub fn default_step(x: &VecN) -> f64 {
    1e-4 * (1.0 + x.norm())
}

fn eval<F: ScalarField + ?Sized>(f: &F, y: &VecN) -> Result<f64> {
    let v = f.value(y).map_err(|e| Error::Evaluation { point: y.to_vec(), reason: e.to_string() })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation { point: y.to_vec(), reason: "non-finite value".into() })
    }
}

fn check_step(h: f64, x: &VecN, dim: usize) -> Result<()> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::invalid("step", format!("must be positive and finite, got {h}")));
    }
    if x.dim() != dim {
        return Err(Error::DimMismatch { expected: dim, got: x.dim() });
    }
    Ok(())
}

/// Central-difference gradient.
pub fn gradient_fd<F: ScalarField + ?Sized>(f: &F, x: &VecN, h: f64) -> Result<VecN> {
    check_step(h, x, f.dim())?;
    let n = x.dim();
    let mut g = VecN::zeros(n);
    for i in 0..n {
        let e = VecN::basis(n, i) * h;
        g[i] = (eval(f, &(*x + e))? - eval(f, &(*x - e))?) / (2.0 * h);
    }
    Ok(g)
}

/// Central-difference Hessian: three-point rule on the diagonal, four-point
/// rule off it. The result is symmetric by construction.
pub fn hessian_fd<F: ScalarField + ?Sized>(f: &F, x: &VecN, h: f64) -> Result<SymMat> {
    check_step(h, x, f.dim())?;
    let n = x.dim();
    let f0 = eval(f, x)?;
    let mut m = SymMat::zeros(n);
    for i in 0..n {
        let ei = VecN::basis(n, i) * h;
        let d = (eval(f, &(*x + ei))? - 2.0 * f0 + eval(f, &(*x - ei))?) / (h * h);
        m.set(i, i, d);
        for j in i + 1..n {
            let ej = VecN::basis(n, j) * h;
            let pp = eval(f, &(*x + ei + ej))?;
            let pm = eval(f, &(*x + ei - ej))?;
            let mp = eval(f, &(*x - ei + ej))?;
            let mm = eval(f, &(*x - ei - ej))?;
            m.set(i, j, (pp - pm - mp + mm) / (4.0 * h * h));
        }
    }
    Ok(m)
}
