mod eval;
mod export;
mod ingest;
mod synth;
mod train;

pub use eval::{cmd_eval, EvalOutcome};
pub use export::{cmd_export, import_embeddings, import_model, ENTITIES_CSV, RELATIONS_CSV};
pub use ingest::{cmd_ingest, IngestSummary};
pub use synth::cmd_synth;
pub use train::{
    cmd_train, TrainOutcome, CHECKPOINT_FILE, CHECKPOINT_MANIFEST, EPOCHS_FILE, RESOLVED_CONFIG,
};

use crate::cli::{Cli, Command};
use crate::error::CliResult;

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Ingest(a) => {
            let s = cmd_ingest(a)?;
            print!("{}", s.report);
        }
        Command::Synth(a) => {
            let n = cmd_synth(a)?;
            println!("wrote {n} triplets to {}", a.out.display());
        }
        Command::Train(a) => {
            let o = cmd_train(a)?;
            println!("wrote {}", o.checkpoint.display());
        }
        Command::Eval(a) => {
            let o = cmd_eval(a)?;
            print!("{}", o.report.to_table());
        }
        Command::Export(a) => {
            let (e, r) = cmd_export(a)?;
            println!("wrote {} and {}", e.display(), r.display());
        }
    }
    Ok(())
}
