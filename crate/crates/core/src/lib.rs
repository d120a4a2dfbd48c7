//! In-betweenness of three group centroids, measured in triangle shape space.
//!
//! The centroids of groups `A`, `B`, `C` form a triangle. Its shape is a
//! point of the unit disk ([`shape`]), from which two indices follow
//! ([`metrics`]): `gamma`, the cosine of the exterior angle at `B`, and
//! `tau`, a smooth similarity to the degenerate triangle with `B` at the
//! midpoint of `AC`. [`inference`] adds stratified bootstrap intervals,
//! Tukey-depth confidence regions and permutation tests; [`io`] wires these
//! into the `ibi` command-line tool.

pub mod error;
pub mod inference;
pub mod io;
pub mod metrics;
pub mod sampling;
pub mod shape;

pub use error::{Error, Result};
pub use metrics::{cosine_ibi, tau_ibi, IbiPair, ShapeStatistics};
pub use shape::{Configuration, Group, ShapePoint, SideLengths};
