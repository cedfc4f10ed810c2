use rand::Rng;

use crate::mpsh::random_plane;
use crate::numkit::{sym_eigen, SymMat, VecN};
use crate::{Error, Result};

/// `Ω = ∩ {x : ℓ_j(x) < c_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfspaceIntersection {
    dim: usize,
    functionals: Vec<VecN>,
    constants: Vec<f64>,
}

impl HalfspaceIntersection {
    pub fn new(dim: usize, functionals: Vec<VecN>, constants: Vec<f64>) -> Result<Self> {
        if !(1..=crate::numkit::MAX_DIM).contains(&dim) {
            return Err(Error::Dimension(dim));
        }
        if functionals.len() != constants.len() {
            return Err(Error::invalid("constants", "one constant per functional"));
        }
        for l in &functionals {
            if l.dim() != dim {
                return Err(Error::DimMismatch { expected: dim, got: l.dim() });
            }
            if l.max_abs() == 0.0 || !l.is_finite() {
                return Err(Error::invalid("functionals", "must be finite and nonzero"));
            }
        }
        if constants.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite { context: "halfspace constant" });
        }
        Ok(HalfspaceIntersection { dim, functionals, constants })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn functionals(&self) -> &[VecN] {
        &self.functionals
    }

    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    pub fn contains(&self, x: &VecN) -> bool {
        self.functionals.iter().zip(&self.constants).all(|(l, c)| l.dot(x) < *c)
    }

    /// Index of the first violated constraint at `x`.
    fn check_interior(&self, x: &VecN) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: x.dim() });
        }
        match self.functionals.iter().zip(&self.constants).position(|(l, c)| l.dot(x) >= *c) {
            Some(index) => Err(Error::EmptyIntersection { index }),
            None => Ok(()),
        }
    }
}

/// An affine 2-plane `x0 + span{u, w}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWitness {
    pub point: VecN,
    pub u: VecN,
    pub w: VecN,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexClassification {
    pub dim: usize,
    pub rank: usize,
    pub contains_plane: bool,
    pub witness: Option<PlaneWitness>,
}

/// Decides whether `H` contains an affine 2-plane: true iff the functionals
/// span a space of dimension at most `n − 2`.
pub fn convex_contains_2plane(h: &HalfspaceIntersection, interior: &VecN) -> Result<ConvexClassification> {
    h.check_interior(interior)?;
    let n = h.dim;
    let mut gram = SymMat::zeros(n);
    for l in &h.functionals {
        gram = gram.add(&SymMat::outer(l));
    }
    let eig = sym_eigen(&gram)?;
    let top = eig.max().max(0.0);
    let thresh = 1e-10 * top;
    let rank = if top == 0.0 { 0 } else { eig.values.iter().filter(|&&x| x > thresh).count() };
    let contains_plane = rank + 2 <= n;
    let witness = contains_plane.then(|| {
        // eigenvalues ascend, so the first two vectors span part of the kernel
        PlaneWitness { point: *interior, u: eig.vectors[0], w: eig.vectors[1] }
    });
    Ok(ConvexClassification { dim: n, rank, contains_plane, witness })
}

/// Outcome of testing random 2-planes through an interior point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub trials: usize,
    pub exited: usize,
    pub contained: usize,
    /// Largest exit distance among planes that leave `H`.
    pub max_exit_radius: f64,
    /// Whether the rank witness, if any, is verified to stay inside.
    pub witness_verified: Option<bool>,
}

/// Exit distance of the plane `x0 + span{u, w}` from `H`, or `None` if the
/// plane never leaves it.
fn exit_radius(h: &HalfspaceIntersection, x0: &VecN, u: &VecN, w: &VecN) -> Option<f64> {
    let mut best: Option<f64> = None;
    for (l, c) in h.functionals.iter().zip(&h.constants) {
        let g = l.dot(u).hypot(l.dot(w));
        if g > 1e-12 * l.norm() {
            let r = (c - l.dot(x0)) / g;
            best = Some(best.map_or(r, |b| b.min(r)));
        }
    }
    best
}

/// Brute-force cross-check of [`convex_contains_2plane`].
pub fn random_plane_trials<R: Rng + ?Sized>(
    h: &HalfspaceIntersection,
    interior: &VecN,
    trials: usize,
    radius: f64,
    rng: &mut R,
) -> Result<TrialReport> {
    let class = convex_contains_2plane(h, interior)?;
    let n = h.dim;
    let mut rep = TrialReport { trials, exited: 0, contained: 0, max_exit_radius: 0.0, witness_verified: None };
    if n < 2 {
        return Ok(rep);
    }
    for _ in 0..trials {
        let plane = random_plane(n, 2, rng);
        let b = plane.basis();
        match exit_radius(h, interior, &b[0], &b[1]) {
            Some(r) if r <= radius => {
                rep.exited += 1;
                rep.max_exit_radius = rep.max_exit_radius.max(r);
            }
            _ => rep.contained += 1,
        }
    }
    if let Some(wt) = class.witness {
        rep.witness_verified = Some(exit_radius(h, &wt.point, &wt.u, &wt.w).is_none() && h.contains(&wt.point));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize) -> VecN {
        VecN::basis(3, i)
    }

    #[test]
    fn slab_contains_plane() {
        let h = HalfspaceIntersection::new(3, vec![e(2), -e(2)], vec![1.0, 1.0]).unwrap();
        let c = convex_contains_2plane(&h, &VecN::zeros(3)).unwrap();
        assert_eq!(c.rank, 1);
        assert!(c.contains_plane);
        let w = c.witness.unwrap();
        assert!(w.u[2].abs() < 1e-12 && w.w[2].abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_plane_trials(&h, &VecN::zeros(3), 100, 1e6, &mut rng).unwrap();
        assert_eq!(t.witness_verified, Some(true));
    }

    #[test]
    fn wedge_has_no_plane() {
        let h = HalfspaceIntersection::new(3, vec![e(1), e(2)], vec![0.0, 0.0]).unwrap();
        let x0 = VecN::new(&[0.0, -1.0, -1.0]);
        let c = convex_contains_2plane(&h, &x0).unwrap();
        assert_eq!(c.rank, 2);
        assert!(!c.contains_plane);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_plane_trials(&h, &x0, 2000, 1e6, &mut rng).unwrap();
        assert_eq!(t.exited, 2000);
    }

    #[test]
    fn whole_space_and_empty() {
        let h = HalfspaceIntersection::new(3, vec![], vec![]).unwrap();
        let c = convex_contains_2plane(&h, &VecN::zeros(3)).unwrap();
        assert_eq!(c.rank, 0);
        assert!(c.contains_plane);
        let h = HalfspaceIntersection::new(3, vec![e(0)], vec![-1.0]).unwrap();
        assert!(matches!(convex_contains_2plane(&h, &VecN::zeros(3)), Err(Error::EmptyIntersection { index: 0 })));
        assert!(HalfspaceIntersection::new(3, vec![VecN::zeros(3)], vec![1.0]).is_err());
    }
}
