use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use super::dataset::{observed_statistics, GroupedDataset};
use crate::error::{Error, Result};
use crate::metrics::ShapeStatistics;
use crate::sampling::SeededRng;
use crate::shape::{Configuration, Group};

/// Two-sided permutation p-values for `tau` and `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PermutationResult {
    pub k: usize,
    pub p_tau: f64,
    /// `None` when the observed `gamma` is undefined.
    pub p_gamma: Option<f64>,
}

fn permuted_statistics(
    ds: &GroupedDataset,
    pooled: &[&[f64]],
    rng: &mut SeededRng,
) -> Option<ShapeStatistics> {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.shuffle(rng);
    let p = ds.dim();
    let mut start = 0;
    let means = Group::ALL.map(|g| {
        let n = ds.n(g);
        let mut sum = vec![0.0; p];
        for &i in &order[start..start + n] {
            for (s, x) in sum.iter_mut().zip(pooled[i]) {
                *s += x;
            }
        }
        start += n;
        sum.iter().map(|s| s / n as f64).collect::<Vec<_>>()
    });
    let config = Configuration::new(&means[0], &means[1], &means[2]).ok()?;
    ShapeStatistics::from_configuration(&config).ok()
}

/// Shuffles group labels `k` times (group sizes fixed); permutation `i`
/// uses stream `i` of `seed`.
///
/// `p = (1 + #{|stat_perm| >= |stat_obs|}) / (k + 1)`. A permutation whose
/// statistic is undefined counts as at least as extreme.
pub fn permutation_test(ds: &GroupedDataset, k: usize, seed: u64) -> Result<PermutationResult> {
    if k == 0 {
        return Err(Error::InvalidParameter("number of permutations must be >= 1".into()));
    }
    let observed = observed_statistics(ds)?;
    let pooled: Vec<&[f64]> = Group::ALL
        .iter()
        .flat_map(|&g| (0..ds.n(g)).map(move |i| ds.row(g, i)))
        .collect();
    let tau_obs = observed.tau.abs();
    let gamma_obs = observed.gamma.map(f64::abs);
    let (tau_hits, gamma_hits) = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut rng = SeededRng::new(seed, i as u64);
            match permuted_statistics(ds, &pooled, &mut rng) {
                None => (1usize, 1usize),
                Some(s) => {
                    let t = usize::from(s.tau.abs() >= tau_obs);
                    let g = match (s.gamma, gamma_obs) {
                        (Some(g), Some(obs)) => usize::from(g.abs() >= obs),
                        _ => 1,
                    };
                    (t, g)
                }
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let denom = (k + 1) as f64;
    Ok(PermutationResult {
        k,
        p_tau: (1 + tau_hits) as f64 / denom,
        p_gamma: gamma_obs.map(|_| (1 + gamma_hits) as f64 / denom),
    })
}
