//! Resampling inference on the centroid triangle.

pub mod bootstrap;
pub mod dataset;
pub mod depth;
pub mod permutation;
pub mod region;
pub mod simulation;

pub use bootstrap::{bootstrap_with, percentile_ci, stratified_bootstrap, BootstrapEnsemble, Resampling};
pub use dataset::{
    centroid_configuration, observed_ibi, observed_statistics, standardize, GroupedDataset, StandardizeMode,
};
pub use depth::{convex_hull, tukey_depth, tukey_depths};
pub use permutation::{permutation_test, PermutationResult};
pub use region::{confidence_region, region_summary, ConfidenceRegion, DepthCloud, RegionSummary};
pub use simulation::{coverage_simulation, SimulationParams, SimulationResult};
