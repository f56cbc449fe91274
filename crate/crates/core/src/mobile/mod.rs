//! Well-labeled mobiles: the tree encoding of pointed Eulerian maps with blocked edges.

mod check;
mod contour;
mod decode;
mod encode;
mod enumerate;
mod json;
mod sample;
mod types;

pub use check::{check_local, check_well_labeled, Violation, WellLabeledReport};
pub use contour::{contour_word, ContourWord, Token, TokenKind};
pub use decode::{from_mobile, from_mobile_with_mode};
pub use encode::to_mobile;
pub use enumerate::{enumerate_mobiles, face_nodes, mobile_weight};
pub use json::{canonical_code, Child, EdgeJsonKind, MobileJson, NodeKind, TreeNode};
pub use sample::{normalize_labels, sample_mobile, Sampler};
pub use types::{EdgeKind, Mobile, MobileEdge, Node};

use thiserror::Error;

use crate::planar_map::MapError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MobileError {
    #[error("single-vertex maps have no mobile")]
    DegenerateMap,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("mobile is not well labeled: {0}")]
    NotWellLabeled(String),
    #[error("contour word breaks the ratchet rule at position {0}")]
    RatchetViolated(usize),
    #[error("malformed mobile: {0}")]
    Malformed(String),
    #[error("series order {0} is too low for the requested size")]
    OrderTooLow(usize),
    #[error("cannot sample: {0}")]
    Sampling(String),
}
