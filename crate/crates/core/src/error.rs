use thiserror::Error;

use crate::state::Axis;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("site {site} out of range for a {n_sites}-site chain")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("state length {got} does not match the expected dimension {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("direction is not a unit vector (norm {norm})")]
    NonUnitDirection { norm: f64 },

    #[error("invalid model parameter `{field}`: {reason}")]
    InvalidModel { field: &'static str, reason: String },

    #[error("invalid solver setting `{field}`: {reason}")]
    InvalidSolver { field: &'static str, reason: String },

    #[error("{n_sites} sites exceeds the limit of {max} for this path")]
    TooLarge { n_sites: usize, max: usize },

    #[error("Lanczos did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("cross term needs two distinct axes, got {0:?} twice")]
    SameAxis(Axis),

    #[error("tangle {0} outside [0, 1]")]
    TangleOutOfRange(f64),

    #[error("closed-form excitation energy undefined: tangle {0} too close to 1")]
    MaximallyMixed(f64),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("pipeline failed at h = {h}: {source}")]
    AtField { h: f64, source: Box<Error> },

    #[error("no factorization point bracketed in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
