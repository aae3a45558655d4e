use thiserror::Error;

/// Errors surfaced by the solver toolkit.
///
/// Domain errors (`TaxOutOfDomain`, `BeyondLaffer`) indicate a point outside
/// the region where the model functions are defined; the remaining variants
/// report failures of a search or a classification precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tax rate {0} is outside the valid domain (must exceed -1)")]
    TaxOutOfDomain(f64),

    #[error("log argument non-positive at t = {t}: point lies beyond a perceived Laffer rate")]
    BeyondLaffer { t: f64 },

    #[error("no good-1 tax rate satisfies the first-order condition at t2 = {t2}")]
    NoSolution { t2: f64 },

    #[error("revenue target {target} exceeds the maximum achievable {max} on the search domain")]
    EmptyLocus { target: f64, max: f64 },

    #[error("perceived problem infeasible at target {target}; maximum attainable perceived revenue is {max_attainable}")]
    Infeasible { target: f64, max_attainable: f64 },

    #[error("theta2 = {theta2} sits exactly on the {which} case boundary")]
    BoundaryCase { theta2: f64, which: &'static str },

    #[error("case taxonomy requires theta1 = 1, got {theta1}")]
    Unsupported { theta1: f64 },

    #[error("multiplier mu = {mu} is too close to 1; the inverse-Ramsey condition is degenerate")]
    DegenerateMultiplier { mu: f64 },

    #[error("no theta in ({lo}, {hi}) yields an inverse-Ramsey outcome at R = {target}")]
    ThresholdNotFound { lo: f64, hi: f64, target: f64 },

    #[error("no grid point satisfies the revenue constraint within tolerance")]
    NoFeasiblePoint,

    #[error("solution path infeasible beyond r = {reached}; partial integral {partial}")]
    PathInfeasible { reached: f64, partial: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("root search failed to converge in {0}")]
    NoConvergence(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
