//! `regimb` command line: synthetic dataset generation, dataset audits
//! against a relevance measure, and the degeneration / correlation
//! studies.
//!
//! Exit codes: 0 success, 2 usage error, 3 data error, 4 runtime or
//! training failure.

mod ingest;
mod output;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ingest::{load_dataset, load_predictions, CsvDatasetSpec, IngestError};
use output::{render_json, write_file, ReportMeta};
use regimb::experiments::{
    audit_binned, run_correlation, run_degeneration, CorrelationConfig, DegenerationConfig,
};
use regimb::measures::RelevanceMeasure;
use regimb::synth::{generate_bimodal, to_csv, BimodalSpec};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "regimb", version, about = "Imbalance diagnostics for regression datasets")]
struct Cli {
    /// Base RNG seed; recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for emitted files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// What to echo on stdout (files are always written).
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic bimodal regression dataset as CSV.
    Generate(GenerateArgs),
    /// Audit a CSV dataset against a relevance measure: histogram,
    /// imbalance scores, and per-bin MAE when predictions are given.
    Audit(AuditArgs),
    /// Reproduce the degeneration-vs-imbalance study on synthetic data.
    Degeneration(DegenerationArgs),
    /// Reproduce the imbalance-metric correlation study on a CSV dataset.
    Correlate(CorrelateArgs),
}

#[derive(Args, Serialize)]
struct GenerateArgs {
    /// Imbalance factor I >= 1 (mode-0 count over mode-1 count).
    #[arg(long, default_value_t = 1.0)]
    imbalance: f64,
    #[arg(long, default_value_t = 500)]
    n_minority: usize,
    #[arg(long, default_value_t = 0.05)]
    mode_std: f64,
    #[arg(long, default_value_t = 4)]
    feature_dim: usize,
    /// Per-coordinate feature cluster spread.
    #[arg(long, default_value_t = 1.0)]
    spread: f64,
}

#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("measure").required(true).args(["measure_json", "measure_file"])))]
struct AuditArgs {
    /// Dataset CSV path.
    #[arg(long)]
    data: PathBuf,
    /// Target column, by name or 0-based index.
    #[arg(long)]
    target: String,
    /// Feature columns (default: all non-target columns).
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    /// Categorical columns to one-hot encode.
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    /// The CSV has no header row; refer to columns by index.
    #[arg(long)]
    no_header: bool,
    /// Relevance measure as an inline JSON object.
    #[arg(long)]
    measure_json: Option<String>,
    /// Relevance measure as a JSON file.
    #[arg(long)]
    measure_file: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Optional predictions (one value per line, aligned with the
    /// ingested rows) for the per-bin MAE.
    #[arg(long)]
    predictions: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DegenerationArgs {
    /// Imbalance factors to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1.0, 3.0, 10.0, 20.0])]
    i_values: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 500)]
    n_minority: usize,
    #[arg(long, default_value_t = 0.05)]
    mode_std: f64,
    #[arg(long, default_value_t = 4)]
    feature_dim: usize,
    #[arg(long, default_value_t = 1.0)]
    spread: f64,
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Preset {
    Abalone,
    Warfarin,
    Parkinson,
}

impl Preset {
    /// Sweep endpoints in less probable target ranges, per dataset.
    fn endpoint(self) -> (f64, f64) {
        match self {
            Preset::Abalone => (18.0, 5.0),
            Preset::Warfarin => (80.0, 10.0),
            Preset::Parkinson => (50.0, 7.0),
        }
    }
}

#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("endpoint").required(true).args(["preset", "endpoint_mean"])))]
struct CorrelateArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(long, value_delimiter = ',')]
    features: Option<Vec<String>>,
    #[arg(long, value_delimiter = ',')]
    categorical: Vec<String>,
    #[arg(long)]
    no_header: bool,
    /// Named sweep endpoint.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Custom sweep endpoint mean (requires --endpoint-std).
    #[arg(long, requires = "endpoint_std")]
    endpoint_mean: Option<f64>,
    #[arg(long)]
    endpoint_std: Option<f64>,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = 0.2)]
    test_fraction: f64,
    #[arg(long, default_value_t = 200)]
    epochs: usize,
    #[arg(long, default_value_t = 1e-3)]
    lr: f64,
    #[arg(long, default_value_t = 32)]
    batch_size: usize,
    #[arg(long, default_value_t = 0.5)]
    t_rel: f64,
    #[arg(long, default_value_t = 10.0)]
    t_err: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::data(e.to_string())
    }
}

impl From<regimb::Error> for CliError {
    fn from(e: regimb::Error) -> Self {
        match &e {
            regimb::Error::Training(_) => CliError::runtime(e.to_string()),
            regimb::Error::InvalidSample(_)
            | regimb::Error::InvalidPredictions(_)
            | regimb::Error::InvalidLabels(_) => CliError::data(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(cli, args),
        Command::Audit(args) => cmd_audit(cli, args),
        Command::Degeneration(args) => cmd_degeneration(cli, args),
        Command::Correlate(args) => cmd_correlate(cli, args),
    }
}

fn cmd_generate(cli: &Cli, args: &GenerateArgs) -> Result<(), CliError> {
    let spec = BimodalSpec {
        n_minority: args.n_minority,
        imbalance_factor: args.imbalance,
        mode_std: args.mode_std,
        feature_dim: args.feature_dim,
        feature_cluster_spread: args.spread,
        seed: cli.seed,
    };
    spec.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let dataset = generate_bimodal(&spec)?;
    let csv = to_csv(&dataset);
    let path = write_file(&cli.out, "synthetic.csv", &csv)?;
    println!("wrote {} rows to {}", dataset.len(), path.display());
    Ok(())
}

fn parse_measure(args: &AuditArgs) -> Result<RelevanceMeasure, CliError> {
    let json = match (&args.measure_json, &args.measure_file) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?,
        _ => unreachable!("clap enforces exactly one measure source"),
    };
    RelevanceMeasure::from_json(&json)
        .map_err(|e| CliError::usage(format!("invalid measure spec: {e}")))
}

fn cmd_audit(cli: &Cli, args: &AuditArgs) -> Result<(), CliError> {
    let measure = parse_measure(args)?;
    let spec = CsvDatasetSpec {
        target: args.target.clone(),
        feature_columns: args.features.clone(),
        categorical_columns: args.categorical.clone(),
        has_header: !args.no_header,
    };
    let dataset = load_dataset(&args.data, &spec)?;
    let predictions = match &args.predictions {
        Some(path) => Some(load_predictions(path, dataset.len())?),
        None => None,
    };
    let bundle = audit_binned(&dataset.targets, predictions.as_deref(), &measure, args.bins)?;

    let meta = ReportMeta::new("audit", cli.seed, args);
    let json = render_json(&meta, &bundle);
    let tsv = bundle.to_tsv();
    write_file(&cli.out, "audit.json", &json)?;
    write_file(&cli.out, "audit.tsv", &tsv)?;
    match cli.format {
        Format::Json => print!("{json}"),
        Format::Tsv => print!("{tsv}"),
        Format::Text => println!(
            "n={} kolmogorov={:.6} wasserstein={:.6}",
            bundle.imbalance.n_samples, bundle.imbalance.kolmogorov, bundle.imbalance.wasserstein
        ),
    }
    Ok(())
}

fn cmd_degeneration(cli: &Cli, args: &DegenerationArgs) -> Result<(), CliError> {
    let config = DegenerationConfig {
        i_values: args.i_values.clone(),
        runs: args.runs,
        base: BimodalSpec {
            n_minority: args.n_minority,
            imbalance_factor: 1.0,
            mode_std: args.mode_std,
            feature_dim: args.feature_dim,
            feature_cluster_spread: args.spread,
            seed: cli.seed,
        },
        test_fraction: args.test_fraction,
        learning_rate: args.lr,
        epochs: args.epochs,
        batch_size: args.batch_size,
    };
    for factor in &config.i_values {
        BimodalSpec { imbalance_factor: *factor, ..config.base.clone() }
            .validate()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    let report = run_degeneration(&config).map_err(|e| CliError::runtime(e.to_string()))?;

    let meta = ReportMeta::new("degeneration", cli.seed, args);
    let json = render_json(&meta, &report);
    let text = report.to_text();
    write_file(&cli.out, "degeneration.json", &json)?;
    write_file(&cli.out, "degeneration.txt", &text)?;
    match cli.format {
        Format::Json => print!("{json}"),
        _ => print!("{text}"),
    }
    Ok(())
}

fn cmd_correlate(cli: &Cli, args: &CorrelateArgs) -> Result<(), CliError> {
    let endpoint = match (args.preset, args.endpoint_mean, args.endpoint_std) {
        (Some(preset), None, _) => preset.endpoint(),
        (None, Some(mean), Some(std)) => (mean, std),
        _ => return Err(CliError::usage("give either --preset or --endpoint-mean/--endpoint-std")),
    };
    let spec = CsvDatasetSpec {
        target: args.target.clone(),
        feature_columns: args.features.clone(),
        categorical_columns: args.categorical.clone(),
        has_header: !args.no_header,
    };
    let dataset = load_dataset(&args.data, &spec)?;
    let config = CorrelationConfig {
        endpoint,
        n_points: args.points,
        runs: args.runs,
        test_fraction: args.test_fraction,
        t_rel: args.t_rel,
        t_err: args.t_err,
        beta: args.beta,
        k: 1.0,
        weighted_mae_bins: 20,
        learning_rate: args.lr,
        epochs: args.epochs,
        batch_size: args.batch_size,
        seed: cli.seed,
    };
    let report = run_correlation(&dataset, &config).map_err(|e| match e {
        regimb::Error::InvalidConfig(_) => CliError::usage(e.to_string()),
        _ => CliError::runtime(e.to_string()),
    })?;

    let meta = ReportMeta::new("correlate", cli.seed, args);
    let json = render_json(&meta, &report);
    let text = report.to_text();
    write_file(&cli.out, "correlation.json", &json)?;
    write_file(&cli.out, "correlation.txt", &text)?;
    match cli.format {
        Format::Json => print!("{json}"),
        _ => print!("{text}"),
    }
    Ok(())
}
