//! Planar maps as rotation systems, face bicolorings, blocked orientations and
//! the distance labelling they induce.

mod blocking;
mod canonical;
mod coloring;
mod json;
mod map;
mod ops;

pub use blocking::{distances, distances_with, validate_blocking, BlockMode, BlockedConfig, BlockingReport, DistanceLabeling};
pub use canonical::{canonical_form, canonical_form_with, relabel_from, CanonicalForm};
pub use coloring::{bicolor_faces, Bicoloring, Color};
pub use json::{MapJson, MapJsonError};
pub use map::PlanarMap;
pub use ops::{dual, squeeze_bivalent};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("a map needs a positive even number of darts, got {0}")]
    BadDartCount(usize),
    #[error("sigma or alpha is not a permutation of the darts")]
    NotPermutation,
    #[error("alpha is not a fixed-point-free involution")]
    NotInvolution,
    #[error("the map is not connected")]
    NotConnected,
    #[error("genus is not zero: V={v} E={e} F={f}")]
    NonPlanar { v: usize, e: usize, f: usize },
    #[error("vertex {0} has odd valence, the faces cannot be bicolored")]
    NotEulerian(usize),
    #[error("origin vertex {0} does not exist")]
    BadOrigin(usize),
    #[error("edge index {0} out of range")]
    BadEdge(usize),
    #[error("face {0} is not a bivalent face of the squeezed colour")]
    NotBivalent(usize),
    #[error("vertex {0} is not reachable from the origin")]
    Unreachable(usize),
    #[error("blocked edges are inconsistent with pair mode at face {0}")]
    PairMismatch(usize),
    #[error("blocked edges contain a cycle in the dual")]
    DualCycle,
}
