//! Eulerian planar maps with blocked edges, their well-labeled mobiles, and
//! exact series solvers for the associated generating functions.

#![allow(clippy::needless_range_loop)]

pub mod mobile;
pub mod models;
pub mod oracle;
pub mod par;
pub mod planar_map;
pub mod series;
