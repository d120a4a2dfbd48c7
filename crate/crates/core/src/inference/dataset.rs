use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{IbiPair, ShapeStatistics};
use crate::shape::{Configuration, Group};

/// Largest accepted condition number of the pooled covariance when whitening.
pub const MAX_CONDITION: f64 = 1e12;

/// Observations split into the three groups `A`, `B`, `C`.
///
/// Each group is stored row-major as `n_g x p`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupedDataset {
    feature_names: Vec<String>,
    groups: [Vec<f64>; 3],
    p: usize,
}

impl GroupedDataset {
    /// From flattened row-major group blocks.
    pub fn from_flat(feature_names: Vec<String>, groups: [Vec<f64>; 3]) -> Result<Self> {
        let p = feature_names.len();
        if p == 0 {
            return Err(Error::InvalidDataset("at least one feature is required".into()));
        }
        for (g, rows) in Group::ALL.iter().zip(&groups) {
            if rows.len() % p != 0 {
                return Err(Error::InvalidDataset(format!(
                    "group {g:?} has {} values, not a multiple of {p} features",
                    rows.len()
                )));
            }
            let n = rows.len() / p;
            if n < 2 {
                return Err(Error::InvalidDataset(format!(
                    "group {g:?} has {n} observations; at least 2 are required"
                )));
            }
            if rows.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidDataset(format!("group {g:?} has non-finite values")));
            }
        }
        Ok(GroupedDataset {
            feature_names,
            groups,
            p,
        })
    }

    /// From labelled observation vectors.
    pub fn from_observations(
        feature_names: Vec<String>,
        observations: impl IntoIterator<Item = (Group, Vec<f64>)>,
    ) -> Result<Self> {
        let p = feature_names.len();
        let mut groups: [Vec<f64>; 3] = Default::default();
        for (g, x) in observations {
            if x.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: x.len(),
                });
            }
            groups[g.index()].extend_from_slice(&x);
        }
        Self::from_flat(feature_names, groups)
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn n(&self, g: Group) -> usize {
        self.groups[g.index()].len() / self.p
    }

    pub fn total(&self) -> usize {
        Group::ALL.iter().map(|g| self.n(*g)).sum()
    }

    /// Row-major block of group `g`.
    pub fn group_data(&self, g: Group) -> &[f64] {
        &self.groups[g.index()]
    }

    pub fn row(&self, g: Group, i: usize) -> &[f64] {
        &self.groups[g.index()][i * self.p..(i + 1) * self.p]
    }

    pub fn group_mean(&self, g: Group) -> Vec<f64> {
        let mut sum = vec![0.0; self.p];
        for row in self.groups[g.index()].chunks_exact(self.p) {
            for (s, x) in sum.iter_mut().zip(row) {
                *s += x;
            }
        }
        let n = self.n(g) as f64;
        sum.iter().map(|s| s / n).collect()
    }

    /// Keeps the listed feature columns, in the given order.
    pub fn select_features(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&j| j >= self.p) {
            return Err(Error::InvalidParameter(format!("feature index {bad} out of range")));
        }
        let names = indices.iter().map(|&j| self.feature_names[j].clone()).collect();
        let groups = Group::ALL.map(|g| {
            self.groups[g.index()]
                .chunks_exact(self.p)
                .flat_map(|row| indices.iter().map(move |&j| row[j]))
                .collect()
        });
        Self::from_flat(names, groups)
    }

    fn map_rows(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Self {
        let groups = Group::ALL.map(|g| {
            self.groups[g.index()]
                .chunks_exact(self.p)
                .flat_map(&f)
                .collect()
        });
        GroupedDataset {
            feature_names: self.feature_names.clone(),
            groups,
            p: self.p,
        }
    }
}

/// Feature preprocessing applied before any shape computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StandardizeMode {
    None,
    /// Overall mean 0 and unit sample variance per feature.
    #[default]
    Feature,
    /// Pooled within-group covariance mapped to the identity.
    Whiten,
}

impl FromStr for StandardizeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(StandardizeMode::None),
            "feature" | "per-feature" => Ok(StandardizeMode::Feature),
            "whiten" => Ok(StandardizeMode::Whiten),
            other => Err(Error::InvalidParameter(format!(
                "unknown standardization '{other}' (expected none, feature or whiten)"
            ))),
        }
    }
}

impl fmt::Display for StandardizeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StandardizeMode::None => "none",
            StandardizeMode::Feature => "feature",
            StandardizeMode::Whiten => "whiten",
        })
    }
}

fn overall_mean(ds: &GroupedDataset) -> Vec<f64> {
    let mut mean = vec![0.0; ds.p];
    for g in Group::ALL {
        for row in ds.group_data(g).chunks_exact(ds.p) {
            for (m, x) in mean.iter_mut().zip(row) {
                *m += x;
            }
        }
    }
    let n = ds.total() as f64;
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

/// Pooled within-group covariance with `N - 3` degrees of freedom.
pub fn pooled_covariance(ds: &GroupedDataset) -> DMatrix<f64> {
    let p = ds.p;
    let mut s = DMatrix::zeros(p, p);
    for g in Group::ALL {
        let mean = DVector::from_vec(ds.group_mean(g));
        for row in ds.group_data(g).chunks_exact(p) {
            let d = DVector::from_column_slice(row) - &mean;
            s.ger(1.0, &d, &d, 1.0);
        }
    }
    s / (ds.total() as f64 - 3.0)
}

pub fn standardize(ds: &GroupedDataset, mode: StandardizeMode) -> Result<GroupedDataset> {
    match mode {
        StandardizeMode::None => Ok(ds.clone()),
        StandardizeMode::Feature => {
            let mean = overall_mean(ds);
            let mut ss = vec![0.0; ds.p];
            for g in Group::ALL {
                for row in ds.group_data(g).chunks_exact(ds.p) {
                    for j in 0..ds.p {
                        ss[j] += (row[j] - mean[j]).powi(2);
                    }
                }
            }
            let denom = ds.total() as f64 - 1.0;
            let sd: Vec<f64> = ss.iter().map(|s| (s / denom).sqrt()).collect();
            if let Some(j) = sd.iter().position(|s| s.is_nan() || *s <= 0.0) {
                return Err(Error::InvalidDataset(format!(
                    "feature '{}' has zero variance",
                    ds.feature_names[j]
                )));
            }
            Ok(ds.map_rows(|row| {
                row.iter()
                    .zip(&mean)
                    .zip(&sd)
                    .map(|((x, m), s)| (x - m) / s)
                    .collect()
            }))
        }
        StandardizeMode::Whiten => {
            let cov = pooled_covariance(ds);
            let eig = SymmetricEigen::new(cov);
            let max = eig.eigenvalues.max();
            let min = eig.eigenvalues.min();
            let condition = if min > 0.0 { max / min } else { f64::INFINITY };
            if condition.is_nan() || condition >= MAX_CONDITION {
                return Err(Error::SingularCovariance { condition });
            }
            let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| 1.0 / l.sqrt()));
            let w = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.transpose();
            let mean = DVector::from_vec(overall_mean(ds));
            Ok(ds.map_rows(|row| {
                let x = &w * (DVector::from_column_slice(row) - &mean);
                x.iter().copied().collect()
            }))
        }
    }
}

/// Triangle of the three group means.
pub fn centroid_configuration(ds: &GroupedDataset) -> Result<Configuration> {
    let [a, b, c] = Group::ALL.map(|g| ds.group_mean(g));
    Configuration::new(&a, &b, &c)
}

/// Indices of the centroid triangle of `ds` as given (standardize first).
pub fn observed_ibi(ds: &GroupedDataset) -> Result<IbiPair> {
    Ok(observed_statistics(ds)?.ibi())
}

pub fn observed_statistics(ds: &GroupedDataset) -> Result<ShapeStatistics> {
    ShapeStatistics::from_configuration(&centroid_configuration(ds)?)
}
