use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ibi_core::inference::{SimulationParams, StandardizeMode};
use ibi_core::io::{cmd_analyze, cmd_simulate, parse_group_mapping, AnalysisConfig};
use ibi_core::{Error, Result};

/// Shape-space in-betweenness analysis of three groups.
#[derive(Parser)]
#[command(name = "ibi", version, about)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "IBI_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Observed indices, bootstrap intervals and regions for a CSV file.
    Analyze(AnalyzeArgs),
    /// Coverage of bootstrap intervals and regions on simulated data.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Column holding the group labels.
    #[arg(long)]
    group_col: String,
    /// Label mapping, e.g. A=setosa,B=versicolor,C=virginica.
    #[arg(long)]
    groups: String,
    /// Comma-separated feature columns (default: every other column).
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    #[arg(long, default_value = "feature")]
    standardize: StandardizeMode,
    #[arg(long, default_value_t = 10_000)]
    boot: usize,
    /// Label permutations for the p-values; 0 skips the test.
    #[arg(long, default_value_t = 0)]
    perm: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.8,0.95")]
    levels: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// JSON report path (default: stdout).
    #[arg(long)]
    report: Option<PathBuf>,
    /// SVG plot path.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    r: f64,
    #[arg(long)]
    phi: f64,
    #[arg(long, default_value_t = 2)]
    p: usize,
    /// Observations per group.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    sigma2: f64,
    #[arg(long, default_value_t = 300)]
    sims: usize,
    #[arg(long, default_value_t = 500)]
    boot: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    /// Centroid size of the mean configuration.
    #[arg(long, default_value_t = ibi_core::inference::simulation::DEFAULT_CENTROID_SIZE)]
    centroid_size: f64,
    /// Output file; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    let groups = parse_group_mapping(&args.groups)?;
    let mut config = AnalysisConfig::new(args.input, args.group_col, groups);
    config.features = args.features;
    config.standardize = args.standardize;
    config.boot = args.boot;
    config.perm = args.perm;
    config.levels = args.levels;
    config.seed = args.seed;
    config.report = args.report;
    config.plot = args.plot;
    let report = cmd_analyze(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let mut params = SimulationParams::new(args.r, args.phi, args.p, args.n, args.sigma2, args.sims, args.boot, args.seed);
    params.level = args.level;
    params.centroid_size = args.centroid_size;
    cmd_simulate(&params, args.out.as_deref())?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be >= 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Simulate(s) => simulate(s),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
