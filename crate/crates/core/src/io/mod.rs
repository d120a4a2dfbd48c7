//! Command-line plumbing: CSV input, JSON reports and SVG plots.

pub mod csv;
pub mod report;
pub mod svg;

pub use self::csv::{load_csv, parse_group_mapping, LoadOptions};
pub use report::{
    analyze_dataset, cmd_analyze, cmd_simulate, run_analysis, AnalysisConfig, AnalysisOutput, AnalysisReport,
    SimulationRow,
};
pub use svg::{render_shape_space_svg, SvgOptions};
