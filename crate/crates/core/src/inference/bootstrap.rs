use rand::Rng;
use rayon::prelude::*;

use super::dataset::GroupedDataset;
use crate::error::{Error, Result};
use crate::metrics::ShapeStatistics;
use crate::sampling::SeededRng;
use crate::shape::{Configuration, Group};

/// How each replicate draws its observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resampling {
    /// `n_g` draws with replacement within each group.
    Stratified,
    /// Every replicate is the original sample. Only useful for testing.
    Identity,
}

/// Shape statistics of `K` bootstrap replicates, indexed by replicate.
///
/// A replicate whose centroids coincide has no shape and is stored as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapEnsemble {
    replicates: Vec<Option<ShapeStatistics>>,
    seed: u64,
}

impl BootstrapEnsemble {
    pub fn new(replicates: Vec<Option<ShapeStatistics>>, seed: u64) -> Self {
        BootstrapEnsemble { replicates, seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of replicates requested, including degenerate ones.
    pub fn k(&self) -> usize {
        self.replicates.len()
    }

    pub fn replicates(&self) -> &[Option<ShapeStatistics>] {
        &self.replicates
    }

    /// Replicates with a defined shape, in replicate order.
    pub fn valid(&self) -> impl Iterator<Item = &ShapeStatistics> + '_ {
        self.replicates.iter().flatten()
    }

    pub fn degenerate_count(&self) -> usize {
        self.replicates.iter().filter(|r| r.is_none()).count()
    }

    /// Valid replicates whose `gamma` is undefined.
    pub fn gamma_undefined_count(&self) -> usize {
        self.valid().filter(|s| s.gamma.is_none()).count()
    }

    pub fn taus(&self) -> Vec<f64> {
        self.valid().map(|s| s.tau).collect()
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.valid().filter_map(|s| s.gamma).collect()
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.valid().map(|s| [s.u, s.v]).collect()
    }
}

fn resampled_configuration(
    ds: &GroupedDataset,
    rng: &mut SeededRng,
    mode: Resampling,
) -> Result<Configuration> {
    let p = ds.dim();
    let means = Group::ALL.map(|g| {
        let n = ds.n(g);
        let mut sum = vec![0.0; p];
        for i in 0..n {
            let idx = match mode {
                Resampling::Stratified => rng.random_range(0..n),
                Resampling::Identity => i,
            };
            for (s, x) in sum.iter_mut().zip(ds.row(g, idx)) {
                *s += x;
            }
        }
        sum.iter().map(|s| s / n as f64).collect::<Vec<_>>()
    });
    Configuration::new(&means[0], &means[1], &means[2])
}

/// Stratified bootstrap: replicate `k` uses stream `k` of `seed`.
pub fn stratified_bootstrap(ds: &GroupedDataset, k: usize, seed: u64) -> Result<BootstrapEnsemble> {
    bootstrap_with(ds, k, seed, Resampling::Stratified)
}

pub fn bootstrap_with(
    ds: &GroupedDataset,
    k: usize,
    seed: u64,
    mode: Resampling,
) -> Result<BootstrapEnsemble> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of bootstrap replicates must be >= 1".into()));
    }
    let replicates = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(seed, i as u64);
            let config = resampled_configuration(ds, &mut rng, mode)?;
            match ShapeStatistics::from_configuration(&config) {
                Ok(s) => Ok(Some(s)),
                Err(Error::DegenerateConfiguration) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BootstrapEnsemble::new(replicates, seed))
}

/// Percentile interval with linear interpolation between order statistics
/// (sample quantile type 7).
pub fn percentile_ci(values: &[f64], level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidParameter(format!("level must lie in (0, 1), got {level}")));
    }
    if values.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "percentile interval needs at least 2 values, got {}",
            values.len()
        )));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::InsufficientData("values must be finite".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    Ok((quantile_sorted(&sorted, alpha), quantile_sorted(&sorted, 1.0 - alpha)))
}

/// Type-7 quantile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::dataset::observed_statistics;
    use approx::assert_abs_diff_eq;

    fn small() -> GroupedDataset {
        let obs = [
            (Group::A, vec![0.0, 0.1]),
            (Group::A, vec![0.2, -0.3]),
            (Group::A, vec![-0.1, 0.0]),
            (Group::B, vec![1.0, 0.5]),
            (Group::B, vec![1.3, 0.2]),
            (Group::B, vec![0.9, 0.7]),
            (Group::C, vec![2.0, -0.2]),
            (Group::C, vec![2.2, 0.3]),
            (Group::C, vec![1.8, 0.1]),
        ];
        GroupedDataset::from_observations(vec!["x".into(), "y".into()], obs).unwrap()
    }

    #[test]
    fn type7_quantiles() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        let (lo, hi) = percentile_ci(&v, 0.9).unwrap();
        assert_abs_diff_eq!(lo, 5.95, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 95.05, epsilon = 1e-12);
        assert_eq!(percentile_ci(&[2.5; 10], 0.95).unwrap(), (2.5, 2.5));
        let sym: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.3).collect();
        let (lo, hi) = percentile_ci(&sym, 0.5).unwrap();
        assert_abs_diff_eq!(lo + hi, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn percentile_errors() {
        assert!(matches!(percentile_ci(&[1.0], 0.9), Err(Error::InsufficientData(_))));
        assert!(percentile_ci(&[1.0, 2.0], 1.0).is_err());
        assert!(percentile_ci(&[1.0, f64::NAN], 0.5).is_err());
    }

    #[test]
    fn identity_replicate_reproduces_observed() {
        let ens = bootstrap_with(&small(), 1, 0, Resampling::Identity).unwrap();
        let obs = observed_statistics(&small()).unwrap();
        assert_eq!(ens.replicates()[0].unwrap().tau, obs.tau);
    }

    #[test]
    fn same_seed_same_ensemble() {
        let a = stratified_bootstrap(&small(), 200, 42).unwrap();
        let b = stratified_bootstrap(&small(), 200, 42).unwrap();
        assert_eq!(a, b);
        let c = stratified_bootstrap(&small(), 200, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn replicates_are_consistent() {
        let ens = stratified_bootstrap(&small(), 300, 1).unwrap();
        for s in ens.valid() {
            assert_abs_diff_eq!(s.tau, 3.0 * s.b2 - 1.0, epsilon = 1e-9);
            assert!(s.u * s.u + s.v * s.v <= 1.0 + 1e-12);
        }
        assert_eq!(ens.k(), 300);
    }

    #[test]
    fn degenerate_replicates_are_counted() {
        // every group is constant and all three coincide
        let obs = Group::ALL
            .iter()
            .flat_map(|g| [(*g, vec![1.0, 1.0]), (*g, vec![1.0, 1.0])]);
        let ds = GroupedDataset::from_observations(vec!["x".into(), "y".into()], obs).unwrap();
        let ens = stratified_bootstrap(&ds, 10, 3).unwrap();
        assert_eq!(ens.degenerate_count(), 10);
        assert!(ens.taus().is_empty());
    }

    #[test]
    fn zero_replicates_rejected() {
        assert!(stratified_bootstrap(&small(), 0, 1).is_err());
    }
}
