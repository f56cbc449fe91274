//! Concrete models: their series systems, closed forms and cross-checks.

pub mod forest;
mod generic;
pub mod hp;
pub mod ising;
pub mod maxblocked;
pub mod singularity;
mod spec;

pub use generic::{build_system, generic_blocked, hard_particles, solve, Bundle};
pub use spec::{ConstraintJson, Grading, ModelSpec, ModelSpecJson, Occupancy, Particles};

use thiserror::Error;

use crate::series::SeriesError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("inexact division: {0}")]
    NonDivisible(String),
    #[error("identity does not hold: {0}")]
    IdentityFailed(String),
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("trees must have as many black leaves as white leaves ({black} vs {white})")]
    UnequalLeaves { black: usize, white: usize },
}
