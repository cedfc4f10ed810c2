//! The m-plurisubharmonicity criterion: a `C²` function is m-psh at `x` iff
//! the sum of the `m` smallest eigenvalues of its Hessian is nonnegative,
//! equivalently iff its Hessian has nonnegative trace on every m-plane.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::numkit::{gram_schmidt, hessian_fd, gradient_fd, sym_eigen, ScalarField, SymMat, VecN};
use crate::{Error, Exec, Result};

/// An m-dimensional linear subspace given by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct MPlane {
    basis: Vec<VecN>,
}

impl MPlane {
    /// Rejects bases that are not orthonormal to `1e-10`.
    pub fn new(basis: Vec<VecN>) -> Result<Self> {
        let Some(first) = basis.first() else {
            return Err(Error::invalid("basis", "empty"));
        };
        let n = first.dim();
        if basis.len() > n {
            return Err(Error::invalid("basis", format!("{} vectors in R^{n}", basis.len())));
        }
        let mut defect = 0.0_f64;
        for (i, a) in basis.iter().enumerate() {
            if a.dim() != n {
                return Err(Error::DimMismatch { expected: n, got: a.dim() });
            }
            for (j, b) in basis.iter().enumerate().skip(i) {
                let want = if i == j { 1.0 } else { 0.0 };
                defect = defect.max((a.dot(b) - want).abs());
            }
        }
        if defect > 1e-10 || !defect.is_finite() {
            return Err(Error::NonOrthonormal { defect });
        }
        Ok(MPlane { basis })
    }

    /// Orthonormalizes the spanning vectors first; fails if they are
    /// dependent.
    pub fn spanned_by(vs: &[VecN]) -> Result<Self> {
        let q = gram_schmidt(vs, 1e-10);
        if q.len() != vs.len() {
            return Err(Error::invalid("basis", "vectors are linearly dependent"));
        }
        Self::new(q)
    }

    pub fn basis(&self) -> &[VecN] {
        &self.basis
    }

    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis[0].dim()
    }
}

/// `Σ bᵢᵀ H bᵢ` over the plane's orthonormal basis.
pub fn trace_on_plane(h: &SymMat, plane: &MPlane) -> Result<f64> {
    if plane.ambient_dim() != h.dim() {
        return Err(Error::DimMismatch { expected: h.dim(), got: plane.ambient_dim() });
    }
    Ok(plane.basis.iter().map(|b| h.quad(b, b)).sum())
}

fn check_m(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::MOutOfRange { m, max: n });
    }
    Ok(())
}

/// Sum of the `m` smallest eigenvalues, the infimum of `trace_on_plane` over
/// all m-planes.
pub fn min_m_trace(h: &SymMat, m: usize) -> Result<f64> {
    check_m(m, h.dim())?;
    Ok(sym_eigen(h)?.values[..m].iter().sum())
}

/// The m-plane spanned by eigenvectors of the `m` smallest eigenvalues.
pub fn minimizing_plane(h: &SymMat, m: usize) -> Result<MPlane> {
    check_m(m, h.dim())?;
    let e = sym_eigen(h)?;
    MPlane::new(e.vectors[..m].to_vec())
}

/// Uniformly distributed m-plane (orthonormalized Gaussian frame).
pub fn random_plane<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> MPlane {
    loop {
        let vs: Vec<VecN> = (0..m).map(|_| VecN::from_fn(n, |_| rng.sample(StandardNormal))).collect();
        if let Ok(p) = MPlane::spanned_by(&vs) {
            return p;
        }
    }
}

/// A twice differentiable function with possibly fallible evaluation.
pub trait C2Field: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &VecN) -> Result<f64>;
    fn gradient(&self, x: &VecN) -> Result<VecN>;
    fn hessian(&self, x: &VecN) -> Result<SymMat>;
}

/// Adapts a [`ScalarField`] by finite differences with a fixed step.
pub struct FdField<F> {
    pub field: F,
    pub step: f64,
}

impl<F: ScalarField> C2Field for FdField<F> {
    fn dim(&self) -> usize {
        self.field.dim()
    }
    fn value(&self, x: &VecN) -> Result<f64> {
        self.field.value(x)
    }
    fn gradient(&self, x: &VecN) -> Result<VecN> {
        gradient_fd(&self.field, x, self.step)
    }
    fn hessian(&self, x: &VecN) -> Result<SymMat> {
        hessian_fd(&self.field, x, self.step)
    }
}

type ValueFn = Box<dyn Fn(&VecN) -> f64 + Send + Sync>;
type GradFn = Box<dyn Fn(&VecN) -> VecN + Send + Sync>;
type HessFn = Box<dyn Fn(&VecN) -> SymMat + Send + Sync>;

/// A field given by closed-form closures for value, gradient and Hessian.
pub struct ClosureField {
    dim: usize,
    value: ValueFn,
    gradient: GradFn,
    hessian: HessFn,
}

impl ClosureField {
    pub fn new(
        dim: usize,
        value: impl Fn(&VecN) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&VecN) -> VecN + Send + Sync + 'static,
        hessian: impl Fn(&VecN) -> SymMat + Send + Sync + 'static,
    ) -> Self {
        ClosureField { dim, value: Box::new(value), gradient: Box::new(gradient), hessian: Box::new(hessian) }
    }

    /// `s |x|²`.
    pub fn scaled_norm_sq(dim: usize, s: f64) -> Self {
        Self::new(dim, move |x| s * x.norm_sq(), move |x| *x * (2.0 * s), move |_| SymMat::identity(dim).scaled(2.0 * s))
    }

    /// `x ↦ a·x + b`.
    pub fn affine(a: VecN, b: f64) -> Self {
        let dim = a.dim();
        Self::new(dim, move |x| a.dot(x) + b, move |_| a, move |_| SymMat::zeros(dim))
    }

    /// `x ↦ xᵀ Q x / 2`.
    pub fn quadratic(q: SymMat) -> Self {
        let dim = q.dim();
        Self::new(dim, move |x| 0.5 * q.quad(x, x), move |x| q.mul_vec(x), move |_| q)
    }
}

impl C2Field for ClosureField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, x: &VecN) -> Result<f64> {
        Ok((self.value)(x))
    }
    fn gradient(&self, x: &VecN) -> Result<VecN> {
        Ok((self.gradient)(x))
    }
    fn hessian(&self, x: &VecN) -> Result<SymMat> {
        Ok((self.hessian)(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    StrictlyPsh,
    Psh,
    Violated,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::StrictlyPsh => "strictly-psh",
            Verdict::Psh => "psh",
            Verdict::Violated => "violated",
        }
    }

    pub fn classify(margin: f64, tol: f64) -> Self {
        if margin > tol {
            Verdict::StrictlyPsh
        } else if margin >= -tol {
            Verdict::Psh
        } else {
            Verdict::Violated
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PshVerdict {
    pub point: VecN,
    /// `λ₁ + … + λ_m` of the Hessian.
    pub margin: f64,
    pub tol: f64,
    pub verdict: Verdict,
    /// Plane realising the margin.
    pub worst_plane: Option<MPlane>,
}

/// `1e-8 (1 + ‖H‖)` with the spectral norm.
pub fn default_tol(h: &SymMat) -> Result<f64> {
    let e = sym_eigen(h)?;
    Ok(1e-8 * (1.0 + e.min().abs().max(e.max().abs())))
}

/// Pointwise verdict. `tol = None` selects [`default_tol`].
pub fn is_m_psh_at<F: C2Field + ?Sized>(rho: &F, x: &VecN, m: usize, tol: Option<f64>) -> Result<PshVerdict> {
    let h = rho.hessian(x)?;
    check_m(m, h.dim())?;
    let e = sym_eigen(&h)?;
    let margin: f64 = e.values[..m].iter().sum();
    let tol = match tol {
        Some(t) => t,
        None => 1e-8 * (1.0 + e.min().abs().max(e.max().abs())),
    };
    Ok(PshVerdict {
        point: *x,
        margin,
        tol,
        verdict: Verdict::classify(margin, tol),
        worst_plane: Some(MPlane::new(e.vectors[..m].to_vec())?),
    })
}

/// Cell-centred lattice on an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub counts: Vec<usize>,
}

impl GridSpec {
    pub fn cube(n: usize, half: f64, count: usize) -> Self {
        GridSpec { lo: vec![-half; n], hi: vec![half; n], counts: vec![count; n] }
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<VecN> {
        let n = self.counts.len();
        (0..self.len())
            .map(|k| {
                let mut r = k;
                VecN::from_fn(n, |i| {
                    let j = r % self.counts[i];
                    r /= self.counts[i];
                    self.lo[i] + (j as f64 + 0.5) * (self.hi[i] - self.lo[i]) / self.counts[i] as f64
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    pub m: usize,
    pub samples: usize,
    pub strict: usize,
    pub psh: usize,
    pub violated: usize,
    pub worst_margin: f64,
    pub worst_point: Option<VecN>,
    /// First violations in sample order, at most [`GridReport::MAX_LISTED`].
    pub violations: Vec<(VecN, f64)>,
}

impl GridReport {
    pub const MAX_LISTED: usize = 64;
}

/// Verdicts over explicit sample points. Any evaluation failure aborts, naming
/// the sample.
pub fn grid_verdict<F: C2Field + ?Sized>(
    rho: &F,
    points: &[VecN],
    m: usize,
    tol: Option<f64>,
    exec: Exec,
) -> Result<GridReport> {
    if points.is_empty() {
        return Err(Error::EmptySamples);
    }
    let verdicts = exec.try_map(points, |x| {
        is_m_psh_at(rho, x, m, tol).map_err(|e| Error::Evaluation { point: x.to_vec(), reason: e.to_string() })
    })?;
    let mut rep = GridReport {
        m,
        samples: points.len(),
        strict: 0,
        psh: 0,
        violated: 0,
        worst_margin: f64::INFINITY,
        worst_point: None,
        violations: Vec::new(),
    };
    for v in &verdicts {
        match v.verdict {
            Verdict::StrictlyPsh => rep.strict += 1,
            Verdict::Psh => rep.psh += 1,
            Verdict::Violated => {
                rep.violated += 1;
                if rep.violations.len() < GridReport::MAX_LISTED {
                    rep.violations.push((v.point, v.margin));
                }
            }
        }
        if v.margin < rep.worst_margin {
            rep.worst_margin = v.margin;
            rep.worst_point = Some(v.point);
        }
    }
    Ok(rep)
}
