use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StarlabError {
    #[error("series division by a series with vanishing constant term")]
    ZeroConstantTerm,
    #[error("series must have constant term 1, found {0}")]
    NotUnitLeading(Complex64),
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
    #[error("normalization violated: expected c0 = 0 and c1 = 1")]
    NotNormalized,
    #[error("branch point of z^{0} at the origin")]
    BranchPointAtZero(Complex64),
    #[error("pole of z^{0} at the origin")]
    PoleAtOrigin(Complex64),
    #[error("evaluation point {0} lies outside the unit disk")]
    OutsideDisk(Complex64),
    #[error("integrand head exponent {0} is not integrable at the origin")]
    DivergentAtOrigin(Complex64),
    #[error("termwise integration meets a t^-1 term at index {0}")]
    LogarithmicTerm(usize),
    #[error("weight factor has a vanishing denominator at k = {0}")]
    PoleInWeight(usize),
    #[error("invalid operator parameters: {0}")]
    InvalidParams(String),
    #[error("quadrature failed to converge on [{a}, {b}]")]
    QuadratureNonConvergence { a: f64, b: f64 },
    #[error("boundary extrapolation did not settle (last change {0:e})")]
    ExtrapolationUnstable(f64),
    #[error("series tail bound {bound:e} at radius {r} exceeds 1e-6")]
    TailTooLarge { r: f64, bound: f64 },
    #[error("dominant curve self-intersects at radius {0}")]
    CurveSelfIntersection(f64),
    #[error("point outside the admissibility regime: {0}")]
    OutsideRegime(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, StarlabError>;
