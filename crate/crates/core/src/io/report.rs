//! Analysis orchestration and the JSON report.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::csv::{load_csv, LoadOptions};
use super::svg::{render_shape_space_svg, SvgOptions};
use crate::error::{Error, Result};
use crate::inference::bootstrap::quantile_sorted;
use crate::inference::region::RECOMMENDED_REPLICATES;
use crate::inference::{
    observed_statistics, percentile_ci, permutation_test, region_summary, standardize, stratified_bootstrap,
    ConfidenceRegion, DepthCloud, GroupedDataset, PermutationResult, RegionSummary, SimulationParams,
    SimulationResult, StandardizeMode,
};
use crate::metrics::ShapeStatistics;
use crate::sampling::derive_seed;
use crate::shape::Group;

const PERMUTATION_TAG: u64 = 0x7065_726d;

/// Everything `analyze` needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub input: PathBuf,
    pub group_col: String,
    /// Labels for `A`, `B`, `C`.
    pub groups: [String; 3],
    pub features: Option<Vec<String>>,
    pub standardize: StandardizeMode,
    pub boot: usize,
    /// Number of permutations; 0 skips the test.
    pub perm: usize,
    pub levels: Vec<f64>,
    pub seed: u64,
    #[serde(skip)]
    pub report: Option<PathBuf>,
    #[serde(skip)]
    pub plot: Option<PathBuf>,
}

impl AnalysisConfig {
    pub fn new(input: impl Into<PathBuf>, group_col: impl Into<String>, groups: [String; 3]) -> Self {
        AnalysisConfig {
            input: input.into(),
            group_col: group_col.into(),
            groups,
            features: None,
            standardize: StandardizeMode::default(),
            boot: 10_000,
            perm: 0,
            levels: vec![0.8, 0.95],
            seed: 1,
            report: None,
            plot: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.boot < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 bootstrap replicates, got {}",
                self.boot
            )));
        }
        if self.levels.is_empty() {
            return Err(Error::InvalidParameter("at least one level is required".into()));
        }
        if let Some(l) = self.levels.iter().find(|l| !(**l > 0.0 && **l < 1.0)) {
            return Err(Error::InvalidParameter(format!("level {l} outside (0, 1)")));
        }
        let [a, b, c] = &self.groups;
        if a == b || b == c || a == c {
            return Err(Error::InvalidParameter("group labels must be distinct".into()));
        }
        Ok(())
    }

    fn load_options(&self) -> LoadOptions {
        LoadOptions {
            group_col: self.group_col.clone(),
            groups: self.groups.clone(),
            features: self.features.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataSummary {
    pub features: Vec<String>,
    pub n_a: usize,
    pub n_b: usize,
    pub n_c: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub replicates: usize,
    pub seed: u64,
    pub degenerate_replicates: usize,
    pub gamma_undefined_replicates: usize,
    pub tau_median: f64,
    pub gamma_median: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelInterval {
    pub level: f64,
    pub tau: [f64; 2],
    pub gamma: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionReport {
    pub level: f64,
    pub depth_threshold: f64,
    pub members: usize,
    pub member_fraction: f64,
    pub area: f64,
    pub hull: Vec<[f64; 2]>,
    pub summary: RegionSummary,
}

/// Machine-readable result of `analyze`. Field order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub config: AnalysisConfig,
    pub data: DataSummary,
    pub observed: ShapeStatistics,
    pub bootstrap: BootstrapSummary,
    pub intervals: Vec<LevelInterval>,
    pub permutation: Option<PermutationResult>,
    pub regions: Vec<RegionReport>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Report plus the regions behind it (the SVG needs member points).
#[derive(Debug, Clone)]
pub struct AnalysisOutput {
    pub report: AnalysisReport,
    pub regions: Vec<ConfidenceRegion>,
}

fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(quantile_sorted(&v, 0.5))
}

/// Runs the full pipeline on an in-memory dataset.
pub fn analyze_dataset(ds: &GroupedDataset, config: &AnalysisConfig) -> Result<AnalysisOutput> {
    config.validate()?;
    let ds = standardize(ds, config.standardize)?;
    let observed = observed_statistics(&ds)?;
    let ens = stratified_bootstrap(&ds, config.boot, config.seed)?;
    let taus = ens.taus();
    let gammas = ens.gammas();
    let mut warnings = Vec::new();
    if taus.len() < 2 {
        return Err(Error::InsufficientReplicates {
            found: taus.len(),
            required: 2,
        });
    }
    if taus.len() < RECOMMENDED_REPLICATES {
        warnings.push(format!(
            "only {} usable replicates; confidence regions need at least {RECOMMENDED_REPLICATES} to be reliable",
            taus.len()
        ));
    }
    if ens.degenerate_count() > 0 {
        warnings.push(format!(
            "{} replicates had coincident centroids and were excluded",
            ens.degenerate_count()
        ));
    }

    let mut levels = config.levels.clone();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let intervals = levels
        .iter()
        .map(|&level| {
            Ok(LevelInterval {
                level,
                tau: percentile_ci(&taus, level)?.into(),
                gamma: percentile_ci(&gammas, level).ok().map(Into::into),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let cloud = DepthCloud::new(&ens)?;
    let regions = levels.iter().map(|&l| cloud.region(l)).collect::<Result<Vec<_>>>()?;
    let region_reports = regions
        .iter()
        .map(|cr| {
            Ok(RegionReport {
                level: cr.level,
                depth_threshold: cr.depth_threshold,
                members: cr.members.len(),
                member_fraction: cr.member_fraction(),
                area: cr.area,
                hull: cr.hull.clone(),
                summary: region_summary(cr)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let permutation = if config.perm > 0 {
        Some(permutation_test(&ds, config.perm, derive_seed(config.seed, PERMUTATION_TAG))?)
    } else {
        None
    };

    let report = AnalysisReport {
        tool: ToolInfo {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        },
        config: AnalysisConfig {
            levels,
            ..config.clone()
        },
        data: DataSummary {
            features: ds.feature_names().to_vec(),
            n_a: ds.n(Group::A),
            n_b: ds.n(Group::B),
            n_c: ds.n(Group::C),
        },
        observed,
        bootstrap: BootstrapSummary {
            replicates: ens.k(),
            seed: config.seed,
            degenerate_replicates: ens.degenerate_count(),
            gamma_undefined_replicates: ens.gamma_undefined_count(),
            tau_median: median(&taus).unwrap_or(f64::NAN),
            gamma_median: median(&gammas),
        },
        intervals,
        permutation,
        regions: region_reports,
        warnings,
    };
    Ok(AnalysisOutput { report, regions })
}

/// Loads the input file and runs the pipeline.
pub fn run_analysis(config: &AnalysisConfig) -> Result<AnalysisOutput> {
    config.validate()?;
    let ds = load_csv(&config.input, &config.load_options())?;
    analyze_dataset(&ds, config)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `analyze`: writes the JSON report (or returns it when no path is set)
/// and the optional SVG plot.
pub fn cmd_analyze(config: &AnalysisConfig) -> Result<AnalysisReport> {
    let out = run_analysis(config)?;
    let json = out.report.to_json()?;
    match &config.report {
        Some(path) => write_file(path, &json)?,
        None => print!("{json}"),
    }
    if let Some(path) = &config.plot {
        let svg = render_shape_space_svg(&out.report, &out.regions, &SvgOptions::default());
        write_file(path, &svg)?;
    }
    Ok(out.report)
}

/// One coverage table row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationRow {
    pub n: usize,
    pub n_total: usize,
    pub sigma2: f64,
    pub ci_coverage: f64,
    pub ci_length: f64,
    pub cr_coverage: f64,
    pub cr_coverage_hull: f64,
    pub cr_area: f64,
}

impl SimulationRow {
    pub fn new(params: &SimulationParams, res: &SimulationResult) -> Self {
        SimulationRow {
            n: params.n_per_group,
            n_total: 3 * params.n_per_group,
            sigma2: params.sigma2,
            ci_coverage: res.ci_coverage,
            ci_length: res.ci_length,
            cr_coverage: res.cr_coverage,
            cr_coverage_hull: res.cr_coverage_hull,
            cr_area: res.cr_area,
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(self).map_err(|e| Error::Io(e.to_string()))?;
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// `simulate`: runs the coverage study and writes a CSV row, or JSON when
/// the output path ends in `.json`. Without a path the CSV goes to stdout.
pub fn cmd_simulate(params: &SimulationParams, out: Option<&Path>) -> Result<SimulationRow> {
    let res = crate::inference::coverage_simulation(params)?;
    let row = SimulationRow::new(params, &res);
    let is_json = out.is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
    let text = if is_json {
        let mut s = serde_json::to_string_pretty(&row).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        s
    } else {
        row.to_csv()?
    };
    match out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    Ok(row)
}
