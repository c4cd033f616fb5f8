//! Combinatorial certification of closed 3-manifold triangulations: face and
//! square classification, Q-matching equations, surface detection and
//! homology.

pub mod census;
pub mod error;
pub mod faces;
pub mod fixtures;
pub mod homology;
pub mod linalg;
pub mod perm;
pub mod qmatch;
pub mod report;
pub mod skeleton;
pub mod squares;
pub mod surface;
pub mod surface_detect;
pub mod triangulation;
pub mod uf;

pub use error::{Error, Result};
pub use skeleton::Skeleton;
pub use triangulation::{Format, Gluing, Triangulation};
