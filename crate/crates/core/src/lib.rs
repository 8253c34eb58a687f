//! Boundary-corrected kernel density estimation on compact manifolds embedded
//! in R^3, plug-in level-set estimation, Hausdorff and measure distances between
//! sets, and geodesic r-convex hull reconstruction.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: manifolds (sphere, hemisphere, embedded torus, the 2x2 SPD
//!   cone), their metrics, evaluation grids and geodesic graphs.
//! - [`density`]: Gaussian kernel estimators with and without the boundary
//!   mass correction.
//! - [`truth`]: closed-form target laws (Wishart, sine-model von Mises on the
//!   torus, von Mises-Fisher, mixtures).
//! - [`samplers`]: seeded, reproducible samplers for the target laws.
//! - [`setops`]: level sets, discrete boundaries, Hausdorff distance, distance
//!   in measure and the r-convex hull.
//! - [`experiment`]: configuration, presets and the replication runner used by
//!   the `mls` binary.

pub mod density;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod samplers;
pub mod setops;
pub mod truth;

pub use error::{Error, Result};
pub use geometry::AmbientPoint;
