use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants that concern a specific location carry the offending point so a
/// caller can reproduce the evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {0} outside supported range 1..=8")]
    Dimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric (max asymmetry {magnitude:e})")]
    Asymmetric { magnitude: f64 },
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },
    #[error("singular linear system")]
    Singular,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("evaluation failed at {point:?}: {reason}")]
    Evaluation { point: Vec<f64>, reason: String },
    #[error("point {point:?} is not on the boundary (|phi|/|grad phi| = {residual:e})")]
    NotOnBoundary { point: Vec<f64>, residual: f64 },
    #[error("boundary is singular at {point:?} (|grad phi| = {gradient_norm:e})")]
    SingularPoint { point: Vec<f64>, gradient_norm: f64 },
    #[error("m = {m} outside 1..={max}")]
    MOutOfRange { m: usize, max: usize },
    #[error("empty sample set")]
    EmptySamples,
    #[error("projection failed at {point:?}: best candidate {best:?}, residual {residual:e}")]
    ProjectionFailed { point: Vec<f64>, best: Vec<f64>, residual: f64 },
    #[error("nearest boundary point is not unique at {point:?} ({multiplicity} minimizers)")]
    NonUniqueFoot { point: Vec<f64>, multiplicity: usize },
    #[error("focal point: 1 + t*nu = {denominator:e}")]
    FocalPoint { denominator: f64 },
    #[error("boundary is not m-convex at {point:?}: m-curvature sum {sigma:e}")]
    NotMConvex { point: Vec<f64>, sigma: f64 },
    #[error("collar width {requested} exceeds reach estimate {reach}")]
    ReachTooSmall { requested: f64, reach: f64 },
    #[error("point {point:?} lies outside the admissible region")]
    OutsideDomain { point: Vec<f64> },
    #[error("map is not harmonic at {z:?}: |laplacian| = {residual:e}")]
    NotHarmonic { z: [f64; 2], residual: f64 },
    #[error("basis is not orthonormal (defect {defect:e})")]
    NonOrthonormal { defect: f64 },
    #[error("no admissible disc: {0}")]
    NoAdmissibleDisc(String),
    #[error("interior point violates constraint {index}: intersection empty or point not interior")]
    EmptyIntersection { index: usize },
    #[error("vertical disc radius fell below {min:e} at {point:?}")]
    DiscTooSmall { point: Vec<f64>, min: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
