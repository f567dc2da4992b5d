//! Near-optimal orientation sets on SO(3).
//!
//! Orientations are unit quaternions, i.e. points on S³ with `q ≡ -q`. A
//! dictionary of orientations is judged by its covering radius, the largest
//! angular distance from any point of S³ to the set, measured exactly as the
//! maximum circumradius of the spherical Delaunay triangulation. Sets are
//! generated by Riesz energy minimization, optimal-Delaunay smoothing and
//! simplex-wise Nelder-Mead refinement, with a crystallographic symmetry
//! group imposed throughout.

pub mod bounds;
pub mod cli;
pub mod delaunay;
pub mod dilog;
pub mod error;
pub mod evaluate;
pub mod exact;
pub mod hull;
pub mod io;
pub mod optimize;
pub mod quat;
pub mod rng;
pub mod symmetry;

pub use error::{Error, Result};
pub use quat::Quaternion;
pub use symmetry::{expand_orbit, laue_group, GroupName, OrientationSet, QuaternionGroup};
