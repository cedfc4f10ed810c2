use super::{SymMat, VecN};
use crate::{Error, Result};

/// Eigen-decomposition of a symmetric matrix.
///
/// Eigenvalues ascend; `vectors[k]` belongs to `values[k]` and is normalized so
/// that its first component of magnitude above `1e-12` is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: Vec<VecN>,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Largest residual `|A v - lambda v|` over all pairs.
    pub fn residual(&self, a: &SymMat) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(l, v)| (a.mul_vec(v) - *v * *l).norm())
            .fold(0.0, f64::max)
    }
}

/// Cyclic Jacobi eigen-solver. Deterministic for identical input.
pub fn sym_eigen(m: &SymMat) -> Result<EigenDecomposition> {
    if !m.is_finite() {
        return Err(Error::NonFinite { context: "sym_eigen input" });
    }
    let n = m.dim();
    let mut a = *m.raw();
    let mut v = [[0.0_f64; super::MAX_DIM]; super::MAX_DIM];
    for (i, row) in v.iter_mut().enumerate().take(n) {
        row[i] = 1.0;
    }
    let scale = m.frobenius();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() <= 1e-17 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut().take(n) {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, VecN)> = (0..n)
        .map(|k| {
            let mut vec = VecN::from_fn(n, |i| v[i][k]);
            if let Some(first) = vec.as_slice().iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    vec = -vec;
                }
            }
            (a[k][k], vec)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (values, vectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition { values, vectors })
}
