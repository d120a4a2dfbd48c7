use serde::Serialize;

use super::bootstrap::BootstrapEnsemble;
use super::depth::{convex_hull, convex_polygon_contains, polygon_area, tukey_depth, tukey_depths, Point};
use crate::error::{Error, Result};
use crate::metrics::ShapeStatistics;

/// Below this many usable replicates a region is still computed, but the
/// caller should warn.
pub const RECOMMENDED_REPLICATES: usize = 100;

/// Replicate shapes with their Tukey depth in the full replicate cloud.
///
/// Depths cost `O(K^2 log K)`, so they are computed once and shared by
/// every confidence level.
#[derive(Debug, Clone)]
pub struct DepthCloud {
    stats: Vec<ShapeStatistics>,
    points: Vec<Point>,
    depths: Vec<f64>,
}

impl DepthCloud {
    pub fn new(ens: &BootstrapEnsemble) -> Result<Self> {
        let stats: Vec<ShapeStatistics> = ens.valid().copied().collect();
        if stats.is_empty() {
            return Err(Error::InsufficientReplicates {
                found: 0,
                required: 1,
            });
        }
        let points: Vec<Point> = stats.iter().map(|s| [s.u, s.v]).collect();
        let depths = tukey_depths(&points);
        Ok(DepthCloud {
            stats,
            points,
            depths,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    /// Depth of an arbitrary point relative to the replicate cloud.
    pub fn depth_of(&self, p: Point) -> f64 {
        tukey_depth(p, &self.points)
    }

    /// Deepest replicates retaining at least a `level` fraction of the cloud.
    pub fn region(&self, level: f64) -> Result<ConfidenceRegion> {
        if !(level > 0.0 && level < 1.0) {
            return Err(Error::InvalidParameter(format!("level must lie in (0, 1), got {level}")));
        }
        let k = self.len();
        let mut sorted = self.depths.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        // guard against level * k landing a hair above an integer
        let keep = ((level * k as f64 - 1e-9).ceil() as usize).clamp(1, k);
        let threshold = sorted[keep - 1];
        let members: Vec<usize> = (0..k).filter(|&i| self.depths[i] >= threshold).collect();
        let member_points: Vec<Point> = members.iter().map(|&i| self.points[i]).collect();
        let hull = convex_hull(&member_points);
        let area = polygon_area(&hull);
        Ok(ConfidenceRegion {
            level,
            depth_threshold: threshold,
            members: members
                .iter()
                .map(|&i| RegionMember {
                    index: i,
                    depth: self.depths[i],
                    stats: self.stats[i],
                })
                .collect(),
            hull,
            area,
            cloud_size: k,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionMember {
    /// Position among the valid replicates.
    pub index: usize,
    pub depth: f64,
    pub stats: ShapeStatistics,
}

/// Tukey-depth confidence region in shape coordinates `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceRegion {
    pub level: f64,
    pub depth_threshold: f64,
    pub members: Vec<RegionMember>,
    /// Convex hull of the member points, counter-clockwise.
    pub hull: Vec<Point>,
    pub area: f64,
    pub cloud_size: usize,
}

impl ConfidenceRegion {
    pub fn member_fraction(&self) -> f64 {
        self.members.len() as f64 / self.cloud_size as f64
    }

    pub fn member_points(&self) -> Vec<Point> {
        self.members.iter().map(|m| [m.stats.u, m.stats.v]).collect()
    }

    /// Whether `p` lies in the convex hull of the members.
    pub fn hull_contains(&self, p: Point) -> bool {
        convex_polygon_contains(&self.hull, p)
    }
}

/// Median and extreme-`tau` shapes of a region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionSummary {
    pub median: ShapeStatistics,
    pub max_tau: ShapeStatistics,
    pub min_tau: ShapeStatistics,
    pub median_depth: f64,
}

pub fn confidence_region(ens: &BootstrapEnsemble, level: f64) -> Result<ConfidenceRegion> {
    DepthCloud::new(ens)?.region(level)
}

/// Deepest member as the median (first by replicate order on ties) and the
/// members of largest and smallest `tau` (same tie rule).
pub fn region_summary(cr: &ConfidenceRegion) -> Result<RegionSummary> {
    let first = cr
        .members
        .first()
        .ok_or(Error::InsufficientReplicates {
            found: 0,
            required: 1,
        })?;
    let (mut median, mut max_tau, mut min_tau) = (first, first, first);
    for m in &cr.members[1..] {
        if m.depth > median.depth {
            median = m;
        }
        if m.stats.tau > max_tau.stats.tau {
            max_tau = m;
        }
        if m.stats.tau < min_tau.stats.tau {
            min_tau = m;
        }
    }
    Ok(RegionSummary {
        median: median.stats,
        max_tau: max_tau.stats,
        min_tau: min_tau.stats,
        median_depth: median.depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::bootstrap::stratified_bootstrap;
    use crate::inference::dataset::GroupedDataset;
    use crate::sampling::{mean_configuration_from_shape, sample_grouped_dataset, GroupSpec, SeededRng};

    fn ensemble(k: usize) -> BootstrapEnsemble {
        let mean = mean_configuration_from_shape(0.5, 1.0, 2).unwrap();
        let mean = crate::shape::Configuration::from_matrix(mean.matrix() * 3.0).unwrap();
        let spec = GroupSpec::from_configuration(&mean, 1.0, 50).unwrap();
        let ds: GroupedDataset = sample_grouped_dataset(&spec, &mut SeededRng::new(8, 0)).unwrap();
        stratified_bootstrap(&ds, k, 9).unwrap()
    }

    #[test]
    fn region_fraction_meets_level() {
        let ens = ensemble(2000);
        let cloud = DepthCloud::new(&ens).unwrap();
        let cr = cloud.region(0.95).unwrap();
        let f = cr.member_fraction();
        assert!((0.95..0.96).contains(&f), "fraction {f}");
        for p in cr.member_points() {
            assert!(cr.hull_contains(p));
        }
        // the threshold is the largest one retaining the level
        let above = cloud.depths().iter().filter(|d| **d > cr.depth_threshold).count();
        assert!((above as f64) < 0.95 * 2000.0);
    }

    #[test]
    fn nested_levels() {
        let cloud = DepthCloud::new(&ensemble(500)).unwrap();
        let inner = cloud.region(0.8).unwrap();
        let outer = cloud.region(0.95).unwrap();
        assert!(inner.depth_threshold >= outer.depth_threshold);
        assert!(inner.area <= outer.area);
    }

    #[test]
    fn summary_orders_tau() {
        let cr = confidence_region(&ensemble(400), 0.95).unwrap();
        let s = region_summary(&cr).unwrap();
        assert!(s.min_tau.tau <= s.median.tau && s.median.tau <= s.max_tau.tau);
    }

    #[test]
    fn single_member_summary() {
        let st = ensemble(1).replicates()[0].unwrap();
        let cr = confidence_region(&BootstrapEnsemble::new(vec![Some(st)], 0), 0.5).unwrap();
        let s = region_summary(&cr).unwrap();
        assert_eq!(s.median, s.max_tau);
        assert_eq!(s.median, s.min_tau);
        assert_eq!(cr.area, 0.0);
    }

    #[test]
    fn empty_ensemble_is_an_error() {
        let ens = BootstrapEnsemble::new(vec![None, None], 0);
        assert!(matches!(
            confidence_region(&ens, 0.9),
            Err(Error::InsufficientReplicates { .. })
        ));
    }
}
