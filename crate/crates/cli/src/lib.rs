//! Command-line surface of the swap-test distance estimator and the hybrid
//! k-medians engine.
//!
//! Three subcommands read a CSV dataset and emit a JSON result document:
//! `distance` (one point against a set mean), `median` (per-candidate table
//! and the selected medoid) and `cluster` (full k-medians trace, optionally
//! scored against a label column).

pub mod document;
pub mod input;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qkmedians_core::{
    classical_distance_oracle, k_medians, median_calc, precision, prepare_dataset, quan_parallel_dist,
    DataSet, ErrorKind, EstimatorConfig, Mode, RunConfig,
};
use thiserror::Error;

pub use document::{CandidateRow, HistogramDocument, Payload, ResolvedConfig, ResultDocument};
pub use input::{load_csv, CsvData};

/// Shots used in sampled mode when neither `--shots` nor `--epsilon` is given.
pub const DEFAULT_SHOTS: u64 = 8192;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("ingestion error: {0}")]
    Ingestion(String),
    #[error(transparent)]
    Core(#[from] qkmedians_core::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    /// 2 usage/validation, 3 ingestion and I/O, 4 numeric/internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Ingestion(_) | CliError::Output(_) => 3,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => 2,
                ErrorKind::Ingestion => 3,
                ErrorKind::Numeric => 4,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qkmedians", version, about = "Swap-test distance estimation and hybrid k-medians clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the distance between a point and the mean of a set.
    Distance(DistanceArgs),
    /// Select the member nearest the set mean.
    Median(MedianArgs),
    /// Run k-medians clustering.
    Cluster(ClusterArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// CSV dataset.
    #[arg(long)]
    pub input: PathBuf,
    /// Skip the first CSV line.
    #[arg(long)]
    pub has_header: bool,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Shots per swap test (sampled mode).
    #[arg(long, conflicts_with = "epsilon")]
    pub shots: Option<u64>,
    /// Target accuracy of P(0); implies ceil(1/epsilon^2) shots.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Result document path (standard output when absent).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Query point as comma-separated values; defaults to row 0 of the input,
    /// with the remaining rows as the set.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub u: Option<Vec<f64>>,
    /// Ancilla outcome counts (sampled mode only).
    #[arg(long)]
    pub histogram: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MedianArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = qkmedians_core::clustering::DEFAULT_MAX_ITERATIONS)]
    pub max_iters: usize,
    /// Comma-separated initial median row indices.
    #[arg(long, value_delimiter = ',')]
    pub initial_medians: Option<Vec<usize>>,
    /// Zero-based CSV column holding integer class labels.
    #[arg(long)]
    pub labels_column: Option<usize>,
}

fn estimator_config(common: &CommonArgs) -> Result<EstimatorConfig, CliError> {
    match common.mode {
        ModeArg::Exact => {
            if common.shots.is_some() || common.epsilon.is_some() {
                return Err(CliError::Usage("--shots/--epsilon require --mode sampled".into()));
            }
            Ok(EstimatorConfig::exact().with_seed(common.seed))
        }
        ModeArg::Sampled => Ok(match (common.shots, common.epsilon) {
            (_, Some(eps)) => EstimatorConfig::from_epsilon(eps, common.seed)?,
            (Some(shots), None) => EstimatorConfig::sampled(shots, common.seed)?,
            (None, None) => EstimatorConfig::sampled(DEFAULT_SHOTS, common.seed)?,
        }),
    }
}

fn resolved(common: &CommonArgs, estimator: &EstimatorConfig) -> ResolvedConfig {
    let sampled = estimator.mode == Mode::Sampled;
    ResolvedConfig {
        input: common.input.display().to_string(),
        has_header: common.has_header,
        mode: estimator.mode,
        shots: sampled.then_some(estimator.shots),
        epsilon: estimator.epsilon,
        seed: common.seed,
        ..ResolvedConfig::default()
    }
}

/// Result of one invocation: the document plus the optional histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: ResultDocument,
    pub histogram: Option<HistogramDocument>,
}

/// Validates flags, loads the input and dispatches the subcommand.
pub fn run_command(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Distance(args) => run_distance(args),
        Command::Median(args) => run_median(args),
        Command::Cluster(args) => run_cluster(args),
    }
}

fn load_set(path: &Path, has_header: bool, labels: Option<usize>) -> Result<(CsvData, DataSet), CliError> {
    let data = load_csv(path, has_header, labels)?;
    let set = prepare_dataset(&data.rows)?;
    Ok((data, set))
}

fn run_distance(args: &DistanceArgs) -> Result<Outcome, CliError> {
    let estimator = estimator_config(&args.common)?;
    if args.histogram.is_some() && estimator.mode != Mode::Sampled {
        return Err(CliError::Usage("--histogram requires --mode sampled".into()));
    }
    let data = load_csv(&args.common.input, args.common.has_header, None)?;
    let (u_raw, set_rows) = match &args.u {
        Some(u) => (u.clone(), data.rows.clone()),
        None => {
            if data.rows.len() < 2 {
                return Err(CliError::Usage(
                    "without --u the input needs a query row followed by at least one set row".into(),
                ));
            }
            (data.rows[0].clone(), data.rows[1..].to_vec())
        }
    };
    let set = prepare_dataset(&set_rows)?;
    let u = set.query_point(&u_raw)?;

    let estimate = quan_parallel_dist(&u, &set, &estimator)?;
    let classical = classical_distance_oracle(&u, &set)?;
    let histogram = match (&args.histogram, estimate.counts) {
        (Some(_), Some(counts)) => Some(HistogramDocument::new(counts, estimator.seed)),
        _ => None,
    };

    let mut config = resolved(&args.common, &estimator);
    config.u = Some(u_raw.clone());
    Ok(Outcome {
        document: ResultDocument::new(
            "distance",
            config,
            Payload::Distance {
                u: u_raw,
                set_size: set.len(),
                dimension: set.original_dim(),
                padded_dimension: set.dim(),
                layout: set.layout(),
                estimate,
                classical_distance: classical,
            },
        ),
        histogram,
    })
}

fn run_median(args: &MedianArgs) -> Result<Outcome, CliError> {
    let estimator = estimator_config(&args.common)?;
    let (data, set) = load_set(&args.common.input, args.common.has_header, None)?;
    let selection = median_calc(&set, &estimator)?;
    let mean = set.mean()[..set.original_dim()].to_vec();
    let candidates = selection
        .candidates
        .iter()
        .enumerate()
        .map(|(i, est)| {
            Ok(CandidateRow {
                index: i,
                point: data.rows[i].clone(),
                z: est.z.value(),
                p0: est.p0,
                distance: est.distance,
                clamped: est.clamped,
                classical_distance: classical_distance_oracle(set.point(i), &set)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(Outcome {
        document: ResultDocument::new(
            "median",
            resolved(&args.common, &estimator),
            Payload::Median {
                median: selection.median,
                mean,
                candidates,
            },
        ),
        histogram: None,
    })
}

fn run_cluster(args: &ClusterArgs) -> Result<Outcome, CliError> {
    let estimator = estimator_config(&args.common)?;
    let (data, set) = load_set(&args.common.input, args.common.has_header, args.labels_column)?;
    if args.k == 0 || args.k > set.len() {
        return Err(CliError::Usage(format!(
            "--k {} must lie in 1..={} (number of points)",
            args.k,
            set.len()
        )));
    }
    let mut run = RunConfig::new(args.k, estimator)
        .with_max_iterations(args.max_iters)
        .with_rng_seed(args.common.seed);
    if let Some(init) = &args.initial_medians {
        run = run.with_initial_medians(init.clone());
    }
    let result = k_medians(&set, &run)?;
    let precision = match &data.labels {
        Some(labels) => Some(precision(&result.final_assignment, labels, args.k)?),
        None => None,
    };

    let mut config = resolved(&args.common, &estimator);
    config.k = Some(args.k);
    config.max_iterations = Some(args.max_iters);
    config.initial_medians = args.initial_medians.clone();
    config.labels_column = args.labels_column;
    Ok(Outcome {
        document: ResultDocument::new(
            "cluster",
            config,
            Payload::Cluster {
                points: data.rows,
                result,
                precision,
            },
        ),
        histogram: None,
    })
}

/// Writes the outcome to the configured destinations. The document goes to
/// `output`, or to `stdout` when that is `None`.
pub fn emit(
    outcome: &Outcome,
    output: Option<&Path>,
    histogram: Option<&Path>,
    stdout: &mut dyn std::io::Write,
) -> Result<(), CliError> {
    let text = outcome.document.to_json()?;
    match output {
        Some(path) => std::fs::write(path, &text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Output(e.to_string()))?,
    }
    if let (Some(path), Some(hist)) = (histogram, &outcome.histogram) {
        std::fs::write(path, hist.to_json()?).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

impl Command {
    pub fn output(&self) -> Option<&Path> {
        match self {
            Command::Distance(a) => a.common.output.as_deref(),
            Command::Median(a) => a.common.output.as_deref(),
            Command::Cluster(a) => a.common.output.as_deref(),
        }
    }

    pub fn histogram(&self) -> Option<&Path> {
        match self {
            Command::Distance(a) => a.histogram.as_deref(),
            _ => None,
        }
    }
}
