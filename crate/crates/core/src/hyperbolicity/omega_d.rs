use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::numkit::VecN;
use crate::{Error, Result};

type Predicate = Arc<dyn Fn(f64, f64) -> bool + Send + Sync>;

/// `Ω_D = {|z| < 1, z²(x²+y²) < 1, (x, y) ∈ D if z = 0}` for a planar `D`.
#[derive(Clone)]
pub struct OmegaD {
    name: String,
    slice: Predicate,
    omitted: Vec<[f64; 2]>,
}

impl fmt::Debug for OmegaD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OmegaD").field("name", &self.name).field("omitted", &self.omitted).finish()
    }
}

impl OmegaD {
    pub fn new(
        name: impl Into<String>,
        slice: impl Fn(f64, f64) -> bool + Send + Sync + 'static,
        omitted: Vec<[f64; 2]>,
    ) -> Self {
        OmegaD { name: name.into(), slice: Arc::new(slice), omitted }
    }

    /// `D` an open round disc.
    pub fn disc(center: [f64; 2], radius: f64) -> Self {
        OmegaD::new(
            format!("disc(r={radius})"),
            move |x, y| (x - center[0]).hypot(y - center[1]) < radius,
            Vec::new(),
        )
    }

    /// `D = ℂ` minus finitely many points.
    pub fn punctured_plane(points: Vec<[f64; 2]>) -> Self {
        let pts = points.clone();
        OmegaD::new(
            format!("plane minus {} points", points.len()),
            move |x, y| pts.iter().all(|q| x != q[0] || y != q[1]),
            points,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn omitted(&self) -> &[[f64; 2]] {
        &self.omitted
    }

    pub fn in_slice(&self, x: f64, y: f64) -> bool {
        (self.slice)(x, y)
    }
}

/// Exact evaluation of the three defining clauses.
pub fn omega_d_membership(dom: &OmegaD, x: &VecN) -> bool {
    if x.dim() != 3 {
        return false;
    }
    let (a, b, z) = (x[0], x[1], x[2]);
    if !(z.abs() < 1.0 && z * z * (a * a + b * b) < 1.0) {
        return false;
    }
    z != 0.0 || dom.in_slice(a, b)
}

/// Upper bound for the minimal distance between two points of `D × {0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainBound {
    pub k: u64,
    pub total: f64,
    pub vertical_p: f64,
    pub vertical_q: f64,
    pub horizontal: f64,
    pub radius_p: f64,
    pub radius_q: f64,
}

fn vertical_disc_ok(dom: &OmegaD, p: &VecN, r: f64) -> bool {
    let (a, b) = (p[0], p[1]);
    let norm = a.hypot(b);
    if r >= 1.0 || r * (norm + r) >= 1.0 {
        return false;
    }
    // the disc {(a + s, b, t) : s² + t² < r²} meets z = 0 along a segment
    let seg = 129;
    if !(0..seg).all(|i| dom.in_slice(a + r * (2.0 * i as f64 / (seg - 1) as f64 - 1.0), b)) {
        return false;
    }
    (1..=16).all(|i| {
        let s = r * i as f64 / 16.0;
        (0..32).all(|j| {
            let t = 2.0 * PI * (j as f64 + 0.5) / 32.0;
            omega_d_membership(dom, &VecN::new(&[a + s * t.cos(), b, s * t.sin()]))
        })
    })
}

/// Radius of the vertical disc centred at `p` in the `xz` direction, halved
/// from `r0` until it fits.
pub fn vertical_disc_radius(dom: &OmegaD, p: &VecN, r0: f64) -> Result<f64> {
    let mut r = r0;
    while r >= 1e-6 {
        if vertical_disc_ok(dom, p, r) {
            return Ok(r);
        }
        r *= 0.5;
    }
    Err(Error::DiscTooSmall { point: p.to_vec(), min: 1e-6 })
}

/// Poincaré length `artanh|w|` from the centre, in the normalization where
/// the unit disc has unit speed at the origin.
fn poincare(w1: [f64; 2], w2: [f64; 2]) -> f64 {
    let num = (w1[0] - w2[0]).hypot(w1[1] - w2[1]);
    // 1 - conj(w1) w2
    let re = 1.0 - (w1[0] * w2[0] + w1[1] * w2[1]);
    let im = -(w1[0] * w2[1] - w1[1] * w2[0]);
    (num / re.hypot(im)).atanh()
}

/// Three-disc chain from `p` up to height `1/k`, across, and down to `q`.
pub fn omega_d_distance_chain(dom: &OmegaD, p: &VecN, q: &VecN, k: u64) -> Result<ChainBound> {
    for x in [p, q] {
        if x.dim() != 3 {
            return Err(Error::DimMismatch { expected: 3, got: x.dim() });
        }
        if x[2] != 0.0 || !omega_d_membership(dom, x) {
            return Err(Error::OutsideDomain { point: x.to_vec() });
        }
    }
    if k < 2 {
        return Err(Error::invalid("k", "must be at least 2"));
    }
    if p == q {
        return Ok(ChainBound { k, total: 0.0, vertical_p: 0.0, vertical_q: 0.0, horizontal: 0.0, radius_p: 0.0, radius_q: 0.0 });
    }
    let h = 1.0 / k as f64;
    let rp = vertical_disc_radius(dom, p, 0.5)?;
    let rq = vertical_disc_radius(dom, q, 0.5)?;
    if h >= rp.min(rq) {
        return Err(Error::invalid("k", "height 1/k must lie inside both vertical discs"));
    }
    let vertical_p = (h / rp).atanh();
    let vertical_q = (h / rq).atanh();
    let kf = k as f64;
    let horizontal = poincare([p[0] / kf, p[1] / kf], [q[0] / kf, q[1] / kf]);
    Ok(ChainBound { k, total: vertical_p + vertical_q + horizontal, vertical_p, vertical_q, horizontal, radius_p: rp, radius_q: rq })
}

/// Sampled evidence that the third coordinate stays in `(-1, 1)` on `Ω_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThirdCoordinateCheck {
    pub samples: usize,
    pub members: usize,
    pub max_abs_z: f64,
    pub bounded: bool,
    pub derivation: &'static str,
}

pub const THIRD_COORDINATE_DERIVATION: &str = "every member satisfies |z| < 1, so f3 is a bounded harmonic function on any \
entire conformal harmonic curve and hence constant; the curve then lies in a horizontal slice, which for z != 0 is a \
disc and for z = 0 is D, omitting two points (documented derivation, not computed)";

pub fn third_coordinate_check(dom: &OmegaD, samples: &[VecN]) -> ThirdCoordinateCheck {
    let mut members = 0;
    let mut max_abs_z: f64 = 0.0;
    for x in samples {
        if omega_d_membership(dom, x) {
            members += 1;
            max_abs_z = max_abs_z.max(x[2].abs());
        }
    }
    ThirdCoordinateCheck {
        samples: samples.len(),
        members,
        max_abs_z,
        bounded: max_abs_z < 1.0,
        derivation: THIRD_COORDINATE_DERIVATION,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> VecN {
        VecN::new(x)
    }

    #[test]
    fn membership_examples() {
        let d = OmegaD::disc([0.0, 0.0], 2.0);
        assert!(omega_d_membership(&d, &v(&[0.0, 0.0, 0.0])));
        assert!(!omega_d_membership(&d, &v(&[10.0, 0.0, 0.5])));
        assert!(omega_d_membership(&d, &v(&[10.0, 0.0, 0.05])));
        assert!(!omega_d_membership(&d, &v(&[10.0, 0.0, 0.0])));
        let c = OmegaD::punctured_plane(vec![[0.5, 1.0], [0.5, -1.0]]);
        assert!(!omega_d_membership(&c, &v(&[0.5, 1.0, 0.0])));
        assert!(omega_d_membership(&c, &v(&[0.5, 1.0, 1e-3])));
    }

    #[test]
    fn equal_points_give_zero() {
        let d = OmegaD::disc([0.0, 0.0], 2.0);
        let p = v(&[0.3, 0.1, 0.0]);
        assert_eq!(omega_d_distance_chain(&d, &p, &p, 10).unwrap().total, 0.0);
    }

    #[test]
    fn chain_shrinks_with_k() {
        let d = OmegaD::disc([0.0, 0.0], 2.0);
        let p = v(&[0.0, 0.0, 0.0]);
        let q = v(&[1.0, 0.0, 0.0]);
        let b: Vec<f64> = [10u64, 100, 1000, 10_000]
            .iter()
            .map(|&k| omega_d_distance_chain(&d, &p, &q, k).unwrap().total)
            .collect();
        assert!(b.windows(2).all(|w| w[1] < w[0]), "{b:?}");
        assert!(b[2] < 0.05);
        assert!(b[3] < 0.01);
    }

    #[test]
    fn thin_slice_shrinks_radius() {
        let d = OmegaD::new("thin", |x: f64, y: f64| x.abs() < 1.0 && y.abs() < 1.0, vec![]);
        let p = v(&[0.9, 0.0, 0.0]);
        let r = vertical_disc_radius(&d, &p, 0.5).unwrap();
        assert!(r <= 0.1 && r > 0.0);
        let empty = OmegaD::new("empty", |_: f64, _: f64| false, vec![]);
        assert!(matches!(vertical_disc_radius(&empty, &p, 0.5), Err(Error::DiscTooSmall { .. })));
    }

    #[test]
    fn third_coordinate_is_bounded() {
        let d = OmegaD::disc([0.0, 0.0], 2.0);
        let s: Vec<VecN> = (0..400)
            .map(|i| {
                let t = i as f64 / 400.0;
                v(&[20.0 * t - 10.0, 3.0 * (7.0 * t).sin(), 2.4 * t - 1.2])
            })
            .collect();
        let c = third_coordinate_check(&d, &s);
        assert!(c.bounded && c.members > 0 && c.members < c.samples);
    }
}
