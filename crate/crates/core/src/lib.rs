//! Numerical building blocks for a convex-integration construction in 2D
//! elastodynamics on the torus.
//!
//! The crate is organised around the objects the construction manipulates:
//!
//! - [`fields`]: periodic space-time tensor fields on `T^2 = [-pi,pi]^2`
//!   with spectral differentiation, quadrature and norm diagnostics;
//! - [`elasticity`]: stored energy, strain invariants, Piola--Kirchhoff
//!   stresses and the order-by-order stress perturbation split;
//! - [`geometry`]: the three-direction decomposition of symmetric 2x2
//!   matrices over `{(4,3),(4,-3),(0,5)}`;
//! - [`mollify`]: moment-vanishing kernels and space/time mollification;
//! - [`cutparams`]: frequency/amplitude schedules, partitions of unity,
//!   index parity and the temporal ramp matrices;
//! - [`waves`]: plane-wave building blocks for the frozen-coefficient
//!   wave operator with a quadratic transverse correction;
//! - [`divinv`]: compactly supported right inverses of the divergence in
//!   Eulerian and Lagrangian coordinates, plus the oscillatory-data
//!   variant;
//! - [`driver`]: one corrected-stress sub-step assembling all of the
//!   above, with momentum, residual and energy diagnostics.

pub mod cutparams;
pub mod divinv;
pub mod driver;
pub mod elasticity;
pub mod fields;
pub mod geometry;
pub mod mollify;
pub mod waves;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: &'static str, got: &'static str },
    #[error("grid mismatch between operands")]
    GridMismatch,
    #[error("too few time nodes: need at least {need}, have {have}")]
    TooFewTimeNodes { need: usize, have: usize },
    #[error("matrix is not symmetric (asymmetry {0:.3e})")]
    NotSymmetric(f64),
    #[error("argument outside the geometric ball: |K - Id| = {dist:.3e} > c0 = {c0:.3e}")]
    OutsideBall { dist: f64, c0: f64 },
    #[error("inadmissible stored-energy coefficients: {0}")]
    Inadmissible(String),
    #[error("parameter overflow in strict schedule at q = {q}; use desk mode")]
    ScheduleOverflow { q: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("building-block coefficients too large: {0}")]
    CoefficientsTooLarge(String),
    #[error("nonzero momenta: linear = {linear:.3e}, angular = {angular:.3e} (tol {tol:.3e})")]
    NonzeroMomenta { linear: f64, angular: f64, tol: f64 },
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("Newton iteration for the inverse deformation did not converge")]
    NewtonDiverged,
    #[error("odd cutoff structure: {0}")]
    TimeCaseDegenerate(String),
    #[error("ODE mass matrix too small: |H_{idx}{idx}| = {value:.3e} < {bound:.3e}")]
    OdeMassTooSmall { idx: usize, value: f64, bound: f64 },
    #[error("interval too short for time mollification (need {need:.3e} margin, have {have:.3e})")]
    IntervalTooShort { need: f64, have: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
