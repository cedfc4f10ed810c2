use crate::numkit::VecN;
use crate::{Error, Result};

/// Position and first/second partial derivatives of a surface patch in `R^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamJet {
    pub x: VecN,
    pub xu: VecN,
    pub xv: VecN,
    pub xuu: VecN,
    pub xuv: VecN,
    pub xvv: VecN,
}

/// A two-parameter patch in `R^3` over the rectangle `chart()`.
pub trait Parametrization: Send + Sync {
    fn jet(&self, u: f64, v: f64) -> ParamJet;
    fn chart(&self) -> ([f64; 2], [f64; 2]);
}

pub(crate) fn cross(a: &VecN, b: &VecN) -> VecN {
    VecN::new(&[a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]])
}

/// Principal curvatures from the first and second fundamental forms, taking
/// `inner` (any vector on the inner side) to orient the normal. Ascending.
pub fn parametric_curvatures(j: &ParamJet, inner: Option<&VecN>) -> Result<[f64; 2]> {
    let mut n = cross(&j.xu, &j.xv);
    let nn = n.norm();
    if nn < 1e-12 {
        return Err(Error::SingularPoint { point: j.x.to_vec(), gradient_norm: nn });
    }
    n = n * (1.0 / nn);
    if let Some(w) = inner {
        if n.dot(w) < 0.0 {
            n = -n;
        }
    }
    let (e, f, g) = (j.xu.dot(&j.xu), j.xu.dot(&j.xv), j.xv.dot(&j.xv));
    let (l, m, nn2) = (j.xuu.dot(&n), j.xuv.dot(&n), j.xvv.dot(&n));
    let det = e * g - f * f;
    // det(II - k I) = 0
    let a = det;
    let b = -(e * nn2 - 2.0 * f * m + g * l);
    let c = l * nn2 - m * m;
    let mean = -b / (2.0 * a);
    let disc = (mean * mean - c / a).max(0.0).sqrt();
    Ok([mean - disc, mean + disc])
}
