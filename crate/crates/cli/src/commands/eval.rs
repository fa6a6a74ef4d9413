use std::fmt::Write as _;

use ddikge_core::evalkit::{
    ddi_classification, link_prediction_ranks, pr_curve, rank_histogram, roc_curve,
    summarize_ranks, TaskMetrics,
};
use ddikge_core::scorers::read_checkpoint;
use ddikge_core::{EmbeddingModel, Error, FilterIndex, MetricsReport, Vocab};

use super::train::read_checkpoint_manifest;
use crate::cli::{EvalArgs, Task};
use crate::data::{create_dir, load_data, write_atomic};
use crate::error::CliResult;

#[derive(Debug, Clone)]
pub struct EvalOutcome {
    pub report: MetricsReport,
    pub files: Vec<std::path::PathBuf>,
}

pub fn check_dimensions(model: &EmbeddingModel, vocab: &Vocab) -> Result<(), Error> {
    if model.num_entities() != vocab.num_entities()
        || model.num_relations() != vocab.num_relations()
    {
        return Err(Error::Evaluation(format!(
            "checkpoint has {} entities and {} relations but the dataset has {} and {}",
            model.num_entities(),
            model.num_relations(),
            vocab.num_entities(),
            vocab.num_relations()
        )));
    }
    Ok(())
}

fn points_csv(header: &str, points: &[(f64, f64)]) -> String {
    let mut out = format!("{header}\n");
    for (x, y) in points {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<EvalOutcome> {
    let model = read_checkpoint(&args.checkpoint)?;
    let (vocab, split) = load_data(&args.data)?;
    check_dimensions(&model, &vocab)?;
    create_dir(&args.out)?;
    let mut files = Vec::new();
    let mut emit = |name: &str, text: String| -> CliResult<()> {
        let path = args.out.join(name);
        write_atomic(&path, text.as_bytes())?;
        files.push(path);
        Ok(())
    };
    let mut report = match args.task {
        Task::Lp => {
            if split.test.is_empty() {
                return Err(Error::Evaluation("empty test set".into()).into());
            }
            let filter = FilterIndex::build(&split);
            let ranks = link_prediction_ranks(&model, &split.test, &filter, args.workers)?;
            if args.plot {
                let hist: Vec<(f64, f64)> = rank_histogram(&ranks)
                    .into_iter()
                    .map(|(r, c)| (r as f64, c as f64))
                    .collect();
                emit("rank_histogram.csv", points_csv("rank,count", &hist))?;
            }
            let values: Vec<f64> = ranks.iter().map(|r| r.rank).collect();
            MetricsReport::new(TaskMetrics::LinkPrediction(summarize_ranks(&values)?))
        }
        Task::Clf => {
            let out = ddi_classification(&model, &split, vocab.num_relations())?;
            if args.plot {
                let scores: Vec<f64> = out
                    .decisions
                    .iter()
                    .flat_map(|d| d.scores.clone())
                    .collect();
                let labels: Vec<bool> = out
                    .decisions
                    .iter()
                    .flat_map(|d| d.labels.clone())
                    .collect();
                emit(
                    "roc_curve.csv",
                    points_csv("fpr,tpr", &roc_curve(&scores, &labels)),
                )?;
                emit(
                    "pr_curve.csv",
                    points_csv("recall,precision", &pr_curve(&scores, &labels)),
                )?;
            }
            out.report
        }
    };
    if let Some(m) = read_checkpoint_manifest(&args.checkpoint) {
        report = report.with_config_hash(m.config_sha256);
    }
    report.check()?;
    let stem = match args.task {
        Task::Lp => "metrics_lp",
        Task::Clf => "metrics_clf",
    };
    emit(&format!("{stem}.txt"), report.to_table())?;
    emit(
        &format!("{stem}.csv"),
        format!("{}\n{}\n", report.csv_header(), report.csv_row()),
    )?;
    Ok(EvalOutcome { report, files })
}
