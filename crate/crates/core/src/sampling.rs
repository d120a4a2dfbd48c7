//! Random configurations and grouped datasets.
//!
//! Every replicate owns a [`SeededRng`]: a ChaCha8 generator keyed by a
//! 64-bit seed and positioned on its own stream. Draws depend only on
//! `(seed, stream)`, so parallel replicates reproduce bit for bit
//! regardless of scheduling. Normals come from the ziggurat sampler in
//! `rand_distr`.

use nalgebra::{DMatrix, Matrix2};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::inference::dataset::GroupedDataset;
use crate::shape::{self, Configuration};

/// Deterministic generator for one `(seed, stream)` pair.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Mixes a seed with a tag (splitmix64 finalizer) to separate independent
/// uses of one user seed, e.g. data generation versus resampling.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-group normal model: group `g` has mean `means[g]` and covariance
/// `sigma2 * I`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    means: [Vec<f64>; 3],
    sigma2: f64,
    n: usize,
}

impl GroupSpec {
    pub fn new(means: [Vec<f64>; 3], sigma2: f64, n: usize) -> Result<Self> {
        let p = means[0].len();
        if p == 0 {
            return Err(Error::InvalidParameter("group means must be nonempty".into()));
        }
        for m in &means[1..] {
            if m.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: m.len(),
                });
            }
        }
        if means.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("group means must be finite".into()));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma2 must be positive, got {sigma2}")));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need n >= 2 per group, got {n}")));
        }
        Ok(GroupSpec { means, sigma2, n })
    }

    /// Group means taken from the landmarks of a configuration.
    pub fn from_configuration(mean: &Configuration, sigma2: f64, n: usize) -> Result<Self> {
        let means = [
            mean.landmark(shape::Group::A),
            mean.landmark(shape::Group::B),
            mean.landmark(shape::Group::C),
        ];
        Self::new(means, sigma2, n)
    }

    pub fn dim(&self) -> usize {
        self.means[0].len()
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mean(&self, g: shape::Group) -> &[f64] {
        &self.means[g.index()]
    }
}

/// Three iid standard normal landmarks in `p`-space.
pub fn sample_null_configuration(p: usize, rng: &mut SeededRng) -> Result<Configuration> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("dimension p must be >= 2, got {p}")));
    }
    let mut m = DMatrix::zeros(3, p);
    for i in 0..3 {
        for j in 0..p {
            m[(i, j)] = rng.standard_normal();
        }
    }
    Configuration::from_matrix(m)
}

/// A centered configuration with unit centroid size and the given shape,
/// spanning the first two coordinates of `p`-space.
pub fn mean_configuration_from_shape(r: f64, phi: f64, p: usize) -> Result<Configuration> {
    if !(0.0..=1.0).contains(&r) || !phi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "shape ({r}, {phi}) is not a point of the unit disk"
        )));
    }
    let p = p.max(2);
    // Target M = E Delta' with Gram matrix proportional to [[1 + u, v], [v, 1 - u]].
    let d1 = ((1.0 + r) / 2.0).sqrt();
    let d2 = ((1.0 - r) / 2.0).sqrt();
    let (s, c) = (phi / 2.0).sin_cos();
    let m = Matrix2::new(d1 * c, d1 * s, d2 * s, -d2 * c);
    // For centered X = Delta' H we have M = H' (Delta T Delta').
    let delta = shape::helmert();
    let link = delta * shape::pairwise_difference() * delta.transpose();
    let link_inv = link
        .try_inverse()
        .expect("Helmert-reduced difference operator is invertible");
    let h = (m * link_inv).transpose();
    let x = delta.transpose() * h;
    let size = x.norm();
    let config = DMatrix::from_fn(3, p, |i, j| if j < 2 { x[(i, j)] / size } else { 0.0 });
    Configuration::from_matrix(config)
}

/// Draws `n` observations per group from the model.
pub fn sample_grouped_dataset(spec: &GroupSpec, rng: &mut SeededRng) -> Result<GroupedDataset> {
    let p = spec.dim();
    let sd = spec.sigma2.sqrt();
    let groups = shape::Group::ALL.map(|g| {
        let mean = spec.mean(g);
        let mut rows = Vec::with_capacity(spec.n * p);
        for _ in 0..spec.n {
            for &mu in mean {
                rows.push(mu + sd * rng.standard_normal());
            }
        }
        rows
    });
    let names = (1..=p).map(|j| format!("x{j}")).collect();
    GroupedDataset::from_flat(names, groups)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::tau_ibi;
    use crate::shape::{shape_point, Group};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_3, PI};

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = SeededRng::new(7, 3);
        let mut b = SeededRng::new(7, 3);
        let mut c = SeededRng::new(7, 4);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }

    #[test]
    fn null_configuration_is_deterministic() {
        let x = sample_null_configuration(3, &mut SeededRng::new(11, 0)).unwrap();
        let y = sample_null_configuration(3, &mut SeededRng::new(11, 0)).unwrap();
        assert_eq!(x, y);
        assert!(sample_null_configuration(1, &mut SeededRng::new(1, 0)).is_err());
    }

    #[test]
    fn null_tau_has_zero_mean() {
        let mut rng = SeededRng::new(2024, 0);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| tau_ibi(&shape_point(&sample_null_configuration(2, &mut rng).unwrap()).unwrap()))
            .sum::<f64>()
            / n as f64;
        assert!(mean.abs() < 0.01, "mean tau {mean}");
    }

    #[test]
    fn null_radius_law() {
        for p in [2usize, 3, 5] {
            let mut rng = SeededRng::new(99, p as u64);
            let n = 40_000;
            let heights: Vec<f64> = (0..n)
                .map(|_| {
                    let r = shape_point(&sample_null_configuration(p, &mut rng).unwrap()).unwrap().r();
                    (1.0 - r * r).sqrt()
                })
                .collect();
            for x in [0.25, 0.5, 0.75] {
                let frac = heights.iter().filter(|h| **h < x).count() as f64 / n as f64;
                assert!((frac - x.powi(p as i32 - 1)).abs() < 0.01, "p={p} x={x} frac={frac}");
            }
        }
    }

    #[test]
    fn mean_configuration_round_trips() {
        for (r, phi) in [(0.5, FRAC_PI_3), (0.9, 4.0), (0.2, 0.1), (1.0, 5.5)] {
            let x = mean_configuration_from_shape(r, phi, 3).unwrap();
            assert_abs_diff_eq!(x.centroid_size(), 1.0, epsilon = 1e-12);
            let sp = shape_point(&x).unwrap();
            assert_abs_diff_eq!(sp.r(), r, epsilon = 1e-9);
            assert_abs_diff_eq!(sp.u(), r * phi.cos(), epsilon = 1e-9);
            assert_abs_diff_eq!(sp.v(), r * phi.sin(), epsilon = 1e-9);
        }
    }

    #[test]
    fn mean_configuration_special_shapes() {
        let eq = mean_configuration_from_shape(0.0, 0.0, 2).unwrap();
        let s = shape::side_lengths(&eq).unwrap();
        for x in s.as_array() {
            assert_abs_diff_eq!(x, 1.0 / 3.0, epsilon = 1e-12);
        }
        let mid = mean_configuration_from_shape(1.0, FRAC_PI_3, 2).unwrap();
        let a = mid.landmark(Group::A);
        let b = mid.landmark(Group::B);
        let c = mid.landmark(Group::C);
        for j in 0..2 {
            assert_abs_diff_eq!(b[j], (a[j] + c[j]) / 2.0, epsilon = 1e-12);
        }
        assert!(mean_configuration_from_shape(1.5, 0.0, 2).is_err());
        assert!(mean_configuration_from_shape(0.5, PI, 1).is_ok());
    }

    #[test]
    fn grouped_dataset_means_are_close() {
        let mean = mean_configuration_from_shape(0.5, FRAC_PI_3, 2).unwrap();
        let spec = GroupSpec::from_configuration(&mean, 1.0, 400).unwrap();
        let ds = sample_grouped_dataset(&spec, &mut SeededRng::new(5, 0)).unwrap();
        let again = sample_grouped_dataset(&spec, &mut SeededRng::new(5, 0)).unwrap();
        assert_eq!(ds, again);
        for g in Group::ALL {
            assert_eq!(ds.n(g), 400);
            let m = ds.group_mean(g);
            for (x, mu) in m.iter().zip(spec.mean(g)) {
                assert!((x - mu).abs() < 4.0 / 20.0);
            }
        }
    }

    #[test]
    fn group_spec_validation() {
        let m = [vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
        assert!(GroupSpec::new(m.clone(), 0.0, 10).is_err());
        assert!(GroupSpec::new(m.clone(), 1.0, 1).is_err());
        assert!(GroupSpec::new([vec![0.0], vec![1.0, 0.0], vec![2.0, 0.0]], 1.0, 10).is_err());
        assert!(GroupSpec::new(m, 1.0, 10).is_ok());
    }

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(3, 4), derive_seed(3, 4));
    }
}
