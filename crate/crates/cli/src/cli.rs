use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ddikge",
    version,
    about = "Drug-interaction knowledge-graph embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a head/relation/tail TSV, build vocabularies and a seeded split.
    Ingest(IngestArgs),
    /// Write a synthetic clustered interaction graph as TSV.
    Synth(SynthArgs),
    /// Train an embedding model from a run config.
    Train(TrainArgs),
    /// Evaluate a checkpoint on the test split.
    Eval(EvalArgs),
    /// Dump checkpoint embeddings as CSV.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    pub tsv: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Skip the first line.
    #[arg(long)]
    pub header: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep every drug pair within a single split.
    #[arg(long)]
    pub split_by_pair: bool,
    #[arg(long, default_value_t = 0.1)]
    pub valid_ratio: f64,
    #[arg(long, default_value_t = 0.1)]
    pub test_ratio: f64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 50)]
    pub entities: usize,
    #[arg(long, default_value_t = 5)]
    pub relations: usize,
    #[arg(long, default_value_t = 4)]
    pub clusters: usize,
    #[arg(long, default_value_t = 0.3)]
    pub density: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Override a config key, e.g. `--set epochs=10`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Task {
    /// Filtered link prediction.
    Lp,
    /// Multi-label interaction classification.
    Clf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    /// Directory written by `ingest`.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long, value_enum)]
    pub task: Task,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write rank histogram or ROC/PR curve points.
    #[arg(long)]
    pub plot: bool,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub checkpoint: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}
