//! Crate-wide error type. Operational failures (bad inputs, degenerate
//! parameter regimes, vanishing probabilities) are reported through this
//! enum; internal invariants use debug assertions instead.

use crate::halfint::HalfInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse {0:?} as a half-integer (expected an integer or ODD/2)")]
    HalfIntParse(String),

    #[error("spin must be a nonnegative half-integer, got {0}")]
    NegativeSpin(HalfInt),

    #[error("{m} is not a magnetic quantum number of spin {j}")]
    InvalidProjection { j: HalfInt, m: HalfInt },

    #[error("amplitude vector has length {got}, expected {expected}")]
    AmplitudeCount { expected: usize, got: usize },

    #[error("squared norm {norm_sq} differs from 1 by more than {tol}")]
    NotNormalized { norm_sq: f64, tol: f64 },

    #[error("theta = {0} lies outside [0, pi]")]
    ThetaRange(f64),

    #[error("parameter {name} = {value} is not finite")]
    NonFinite { name: &'static str, value: f64 },

    #[error("outcome distribution for sigma = {sigma} is singular (chi = {chi})")]
    SingularDistribution { sigma: HalfInt, chi: f64 },

    #[error("joint outcome ({m}, {mp}) has vanishing probability")]
    VanishingProbability { m: HalfInt, mp: HalfInt },

    #[error("recovery width undefined: chi_sigma = {0} saturates the distribution")]
    SingularWidth(f64),

    #[error("weak-interaction width undefined: {0}")]
    SingularWeakWidth(&'static str),

    #[error("operation requires a spin-1/2 system, got s = {0}")]
    NotSpinHalf(HalfInt),

    #[error("coefficient a_(m = {m}, sigma = {sigma}) vanishes; outcome not invertible")]
    NotInvertible { m: HalfInt, sigma: HalfInt },

    #[error("kappa = {kappa} exceeds the invertibility bound min|a| = {bound}")]
    KappaTooLarge { kappa: f64, bound: f64 },

    #[error("gamma = {0} lies outside the open interval (0, pi/2)")]
    GammaRange(f64),

    #[error("probe superposition has no components")]
    EmptyProbe,

    #[error("duplicate probe component at j = {0}")]
    DuplicateProbeComponent(HalfInt),

    #[error("no probe component contributes to outcome m = {0}")]
    NoContribution(HalfInt),

    #[error("a diagonal entry of the reversal product vanishes at m = {0}")]
    VanishingEntry(HalfInt),

    #[error("amplitude vector is zero; cannot normalize")]
    ZeroVector,

    #[error("preparation outcome m = {0} has vanishing probability")]
    VanishingPreparation(HalfInt),

    #[error("sigma_tilde = 0 admits no renormalized coupling")]
    ZeroSigmaTilde,

    #[error("joint dimension (2j+1)(2s+1) = {0} exceeds the simulator cap {cap}", cap = crate::oracle::MAX_JOINT_DIM)]
    JointTooLarge(usize),

    #[error("probe outcome m = {0} has zero probability")]
    ZeroProbabilityOutcome(HalfInt),
}

pub type Result<T> = std::result::Result<T, Error>;
