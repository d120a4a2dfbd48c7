use std::collections::BTreeSet;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::GroupedDataset;
use crate::shape::Group;

/// Which columns to read and how labels map to `A`, `B`, `C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadOptions {
    pub group_col: String,
    /// Labels for `A`, `B`, `C`, in that order.
    pub groups: [String; 3],
    /// Feature columns; `None` takes every column except the group column.
    pub features: Option<Vec<String>>,
}

/// Parses `A=<label>,B=<label>,C=<label>` (any order).
pub fn parse_group_mapping(spec: &str) -> Result<[String; 3]> {
    let mut out: [Option<String>; 3] = Default::default();
    for part in spec.split(',') {
        let (key, label) = part.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("group mapping entry '{part}' is not of the form A=<label>"))
        })?;
        let g = match key.trim() {
            "A" | "a" => Group::A,
            "B" | "b" => Group::B,
            "C" | "c" => Group::C,
            other => return Err(Error::InvalidParameter(format!("unknown group key '{other}'"))),
        };
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::InvalidParameter(format!("empty label for group {g:?}")));
        }
        if out[g.index()].replace(label.to_string()).is_some() {
            return Err(Error::InvalidParameter(format!("group {g:?} mapped twice")));
        }
    }
    let [a, b, c] = out;
    match (a, b, c) {
        (Some(a), Some(b), Some(c)) => {
            if a == b || b == c || a == c {
                return Err(Error::InvalidParameter("group labels must be distinct".into()));
            }
            Ok([a, b, c])
        }
        _ => Err(Error::InvalidParameter("mapping must name A, B and C".into())),
    }
}

/// Reads a headed CSV file into a grouped dataset.
///
/// Rows are numbered as in the file, the header being row 1.
pub fn load_csv(path: &Path, opts: &LoadOptions) -> Result<GroupedDataset> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.to_path_buf()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Io(e.to_string()))?;
    let headers = reader.headers().map_err(|e| Error::Io(e.to_string()))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::InvalidParameter(format!("column '{name}' not found in header")))
    };
    let group_idx = find(&opts.group_col)?;
    let feature_names: Vec<String> = match &opts.features {
        Some(f) if f.is_empty() => {
            return Err(Error::InvalidParameter("feature list is empty".into()));
        }
        Some(f) => f.clone(),
        None => headers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != group_idx)
            .map(|(_, h)| h.trim().to_string())
            .collect(),
    };
    let feature_idx: Vec<usize> = feature_names.iter().map(|f| find(f)).collect::<Result<_>>()?;

    let mut observations = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::Parse {
            row,
            column: String::new(),
            message: e.to_string(),
        })?;
        let label = record.get(group_idx).unwrap_or("").trim();
        let g = opts
            .groups
            .iter()
            .position(|l| l == label)
            .and_then(Group::from_index)
            .ok_or_else(|| Error::UnknownGroupLabel(label.to_string()))?;
        seen.insert(g);
        let values = feature_idx
            .iter()
            .zip(&feature_names)
            .map(|(&j, name)| {
                let raw = record.get(j).unwrap_or("").trim();
                raw.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Parse {
                        row,
                        column: name.clone(),
                        message: format!("'{raw}' is not a finite number"),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        observations.push((g, values));
    }
    if seen.len() < 3 {
        return Err(Error::FewerThanThreeGroups { found: seen.len() });
    }
    GroupedDataset::from_observations(feature_names, observations)
}
