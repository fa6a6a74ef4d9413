use std::path::{Path, PathBuf};

use ddikge_core::advtrain::{EpochReport, EPOCH_CSV_HEADER};
use ddikge_core::{EmbeddingModel, Trainer};
use serde::{Deserialize, Serialize};

use crate::cli::TrainArgs;
use crate::config::{ResolvedRun, RunConfig};
use crate::data::{create_dir, load_data, write_atomic};
use crate::error::CliResult;

pub const CHECKPOINT_FILE: &str = "checkpoint.bin";
pub const CHECKPOINT_MANIFEST: &str = "checkpoint.manifest";
pub const EPOCHS_FILE: &str = "epochs.csv";
pub const RESOLVED_CONFIG: &str = "resolved_config.toml";

/// Provenance stored next to every checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointManifest {
    pub seed: u64,
    pub config_sha256: String,
    pub scorer: String,
    pub sampler: String,
    pub epochs_completed: usize,
    pub status: String,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub run: ResolvedRun,
    pub checkpoint: PathBuf,
    pub reports: Vec<EpochReport>,
}

fn epochs_csv(reports: &[EpochReport]) -> String {
    let mut out = format!("{EPOCH_CSV_HEADER}\n");
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn save(
    run: &ResolvedRun,
    model: &EmbeddingModel,
    reports: &[EpochReport],
    status: &str,
) -> CliResult<()> {
    let dir = &run.output_dir;
    write_atomic(&dir.join(CHECKPOINT_FILE), &model.to_bytes())?;
    write_atomic(&dir.join(EPOCHS_FILE), epochs_csv(reports).as_bytes())?;
    let manifest = CheckpointManifest {
        seed: run.train.seed,
        config_sha256: run.config_hash(),
        scorer: run.train.scorer.to_string(),
        sampler: run.train.sampler.to_string(),
        epochs_completed: reports.len(),
        status: status.into(),
    };
    let text = toml::to_string(&manifest).expect("manifest serialises");
    write_atomic(&dir.join(CHECKPOINT_MANIFEST), text.as_bytes())
}

pub fn read_checkpoint_manifest(checkpoint: &Path) -> Option<CheckpointManifest> {
    let text =
        std::fs::read_to_string(crate::data::sibling(checkpoint, CHECKPOINT_MANIFEST)).ok()?;
    toml::from_str(&text).ok()
}

/// Validates everything before any compute. On a training failure the last
/// completed epoch is saved and the error is returned.
pub fn cmd_train(args: &TrainArgs) -> CliResult<TrainOutcome> {
    let base = args.config.parent().unwrap_or(Path::new("."));
    let run = RunConfig::load(&args.config, &args.overrides)?.resolve(base)?;
    let (vocab, split) = load_data(&run.data_dir)?;
    let mut trainer = Trainer::new(
        run.train.clone(),
        vocab.num_entities(),
        vocab.num_relations(),
        &split.train,
    )?;
    create_dir(&run.output_dir)?;
    write_atomic(
        &run.output_dir.join(RESOLVED_CONFIG),
        run.to_toml().as_bytes(),
    )?;

    let mut reports = Vec::with_capacity(run.train.epochs);
    let mut last_good = trainer.model().clone();
    for _ in 0..run.train.epochs {
        match trainer.run_epoch() {
            Ok(r) => {
                if !args.quiet {
                    eprintln!(
                        "epoch {:>4}  l_ga {:.4}  l_d {:.4}  l_g {:.4}  {:.1}s",
                        r.epoch, r.l_ga, r.l_d, r.l_g, r.seconds
                    );
                }
                reports.push(r);
                last_good = trainer.model().clone();
                if run.checkpoint_every > 0 && r.epoch % run.checkpoint_every == 0 {
                    save(&run, &last_good, &reports, "partial")?;
                }
            }
            Err(e) => {
                save(&run, &last_good, &reports, &format!("failed: {e}"))?;
                return Err(e.into());
            }
        }
    }
    save(&run, &last_good, &reports, "complete")?;
    Ok(TrainOutcome {
        checkpoint: run.output_dir.join(CHECKPOINT_FILE),
        run,
        reports,
    })
}
