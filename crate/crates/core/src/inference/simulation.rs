use rayon::prelude::*;
use serde::Serialize;

use super::bootstrap::{percentile_ci, stratified_bootstrap};
use super::region::DepthCloud;
use crate::error::{Error, Result};
use crate::metrics::tau_ibi;
use crate::sampling::{derive_seed, mean_configuration_from_shape, sample_grouped_dataset, GroupSpec, SeededRng};
use crate::shape::{Configuration, ShapePoint};

/// Centroid size of the default mean configuration: each landmark at unit
/// distance from the centroid.
pub const DEFAULT_CENTROID_SIZE: f64 = 1.732_050_807_568_877_2;

const DATA_TAG: u64 = 1;
const BOOT_TAG: u64 = 2;

/// Coverage study design: balanced normal groups around a mean triangle of
/// shape `(r, phi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationParams {
    pub r: f64,
    pub phi: f64,
    pub p: usize,
    pub n_per_group: usize,
    pub sigma2: f64,
    pub n_sims: usize,
    pub k: usize,
    pub seed: u64,
    pub level: f64,
    pub centroid_size: f64,
}

impl SimulationParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(r: f64, phi: f64, p: usize, n_per_group: usize, sigma2: f64, n_sims: usize, k: usize, seed: u64) -> Self {
        SimulationParams {
            r,
            phi,
            p,
            n_per_group,
            sigma2,
            n_sims,
            k,
            seed,
            level: 0.95,
            centroid_size: DEFAULT_CENTROID_SIZE,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(0.0..=1.0).contains(&self.r) || !self.phi.is_finite() {
            return bad(format!("(r, phi) = ({}, {}) is not a disk point", self.r, self.phi));
        }
        if self.p < 2 {
            return bad(format!("p must be >= 2, got {}", self.p));
        }
        if self.n_per_group < 2 {
            return bad(format!("n per group must be >= 2, got {}", self.n_per_group));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return bad(format!("sigma2 must be positive, got {}", self.sigma2));
        }
        if self.n_sims == 0 || self.k < 2 {
            return bad("need at least 1 simulation and 2 bootstrap replicates".into());
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return bad(format!("level must lie in (0, 1), got {}", self.level));
        }
        if !(self.centroid_size > 0.0 && self.centroid_size.is_finite()) {
            return bad(format!("centroid size must be positive, got {}", self.centroid_size));
        }
        Ok(())
    }
}

/// Averages over the simulated datasets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationResult {
    pub n_sims: usize,
    /// Fraction of percentile intervals for `tau` containing the true `tau`.
    pub ci_coverage: f64,
    pub ci_length: f64,
    /// Fraction where the true `(u, v)` is at least as deep in the
    /// replicate cloud as the region's depth threshold.
    pub cr_coverage: f64,
    /// Fraction of regions whose member hull contains the true `(u, v)`.
    pub cr_coverage_hull: f64,
    pub cr_area: f64,
    /// Simulations skipped because too few replicates had a shape.
    pub failed: usize,
}

struct SimOutcome {
    ci_hit: bool,
    ci_length: f64,
    hull_hit: bool,
    depth_hit: bool,
    area: f64,
}

fn one_simulation(params: &SimulationParams, spec: &GroupSpec, truth: &ShapePoint, s: usize) -> Result<SimOutcome> {
    let mut rng = SeededRng::new(derive_seed(params.seed, DATA_TAG), s as u64);
    let ds = sample_grouped_dataset(spec, &mut rng)?;
    let boot_seed = derive_seed(derive_seed(params.seed, BOOT_TAG), s as u64);
    let ens = stratified_bootstrap(&ds, params.k, boot_seed)?;
    let (lo, hi) = percentile_ci(&ens.taus(), params.level)?;
    let true_tau = tau_ibi(truth);
    let cloud = DepthCloud::new(&ens)?;
    let cr = cloud.region(params.level)?;
    let target = [truth.u(), truth.v()];
    Ok(SimOutcome {
        ci_hit: lo <= true_tau && true_tau <= hi,
        ci_length: hi - lo,
        hull_hit: cr.hull_contains(target),
        depth_hit: cloud.depth_of(target) >= cr.depth_threshold,
        area: cr.area,
    })
}

/// Runs `n_sims` independent datasets, each analysed with a `k`-replicate
/// bootstrap at `params.level`.
pub fn coverage_simulation(params: &SimulationParams) -> Result<SimulationResult> {
    params.validate()?;
    let unit = mean_configuration_from_shape(params.r, params.phi, params.p)?;
    let mean = Configuration::from_matrix(unit.matrix() * params.centroid_size)?;
    let truth = ShapePoint::from_polar(params.r, params.phi)?;
    let spec = GroupSpec::from_configuration(&mean, params.sigma2, params.n_per_group)?;

    let outcomes: Vec<Option<SimOutcome>> = (0..params.n_sims)
        .into_par_iter()
        .map(|s| match one_simulation(params, &spec, &truth, s) {
            Ok(o) => Ok(Some(o)),
            Err(Error::InsufficientData(_) | Error::InsufficientReplicates { .. }) => Ok(None),
            Err(e) => Err(e),
        })
        .collect::<Result<_>>()?;

    let done: Vec<&SimOutcome> = outcomes.iter().flatten().collect();
    let failed = params.n_sims - done.len();
    if done.is_empty() {
        return Err(Error::InsufficientReplicates {
            found: 0,
            required: 1,
        });
    }
    let m = done.len() as f64;
    let frac = |f: fn(&SimOutcome) -> bool| done.iter().filter(|o| f(o)).count() as f64 / m;
    Ok(SimulationResult {
        n_sims: params.n_sims,
        ci_coverage: frac(|o| o.ci_hit),
        ci_length: done.iter().map(|o| o.ci_length).sum::<f64>() / m,
        cr_coverage: frac(|o| o.depth_hit),
        cr_coverage_hull: frac(|o| o.hull_hit),
        cr_area: done.iter().map(|o| o.area).sum::<f64>() / m,
        failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn vanishing_noise_collapses_intervals() {
        let params = SimulationParams::new(0.5, FRAC_PI_3, 2, 30, 1e-6, 5, 200, 3);
        let res = coverage_simulation(&params).unwrap();
        assert!(res.ci_length < 0.01);
        assert!(res.cr_area < 1e-3);
    }

    #[test]
    fn single_simulation_has_binary_coverage() {
        let params = SimulationParams::new(0.5, FRAC_PI_3, 2, 30, 1.0, 1, 100, 3);
        let res = coverage_simulation(&params).unwrap();
        assert!(res.ci_coverage == 0.0 || res.ci_coverage == 1.0);
        assert_eq!(coverage_simulation(&params).unwrap(), res);
    }

    #[test]
    fn invalid_parameters() {
        let mut params = SimulationParams::new(0.5, FRAC_PI_3, 2, 30, 1.0, 1, 100, 3);
        params.sigma2 = 0.0;
        assert!(matches!(coverage_simulation(&params), Err(Error::InvalidParameter(_))));
        params.sigma2 = 1.0;
        params.p = 1;
        assert!(coverage_simulation(&params).is_err());
    }
}
