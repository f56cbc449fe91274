//! Independent ground truth by exhaustive enumeration of small maps.

pub mod checks;
mod faces;
mod maps;
mod weights;

pub use faces::{FaceProfile, MAX_PROFILE_EDGES};
pub use maps::{enumerate_rooted_maps, RootedMaps, MAX_SIGMA_EDGES};
pub use weights::{balanced_profiles, weighted_count, weighted_counts, Blockings, Convention, FaceWeight, Task};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration cap exceeded: {0} edges")]
    CapExceeded(usize),
    #[error("labelled count is not divisible as expected: {0}")]
    NonDivisible(String),
    #[error("black and white valences do not balance in {0}")]
    Unbalanced(String),
}
