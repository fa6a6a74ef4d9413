use std::fmt::Write as _;

use ddikge_core::kgstore::{load_tsv, split, split_by_pair, SplitRatios};

use crate::cli::IngestArgs;
use crate::data::{
    create_dir, tsv_bytes, write_atomic, SplitManifest, INGEST_REPORT, SPLIT_MANIFEST, TEST_FILE,
    TRAIN_FILE, TRIPLETS_FILE, VALID_FILE,
};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct IngestSummary {
    pub manifest: SplitManifest,
    pub triplets: usize,
    pub duplicates: usize,
    pub report: String,
}

pub fn cmd_ingest(args: &IngestArgs) -> CliResult<IngestSummary> {
    if !args.tsv.is_file() {
        return Err(CliError::usage(format!(
            "{}: cannot read input file",
            args.tsv.display()
        )));
    }
    let ratios = SplitRatios {
        train: 1.0 - args.valid_ratio - args.test_ratio,
        valid: args.valid_ratio,
        test: args.test_ratio,
    };
    let loaded = load_tsv(&args.tsv, args.header)?;
    let parts = if args.split_by_pair {
        split_by_pair(&loaded.triplets, ratios, args.seed)?
    } else {
        split(&loaded.triplets, ratios, args.seed)?
    };
    let vocab = &loaded.vocab;
    let manifest = SplitManifest {
        seed: args.seed,
        by_pair: args.split_by_pair,
        entities: vocab.num_entities(),
        relations: vocab.num_relations(),
        train: parts.train.len(),
        valid: parts.valid.len(),
        test: parts.test.len(),
    };
    let mut report = String::new();
    let _ = writeln!(report, "source      {}", args.tsv.display());
    let _ = writeln!(report, "triplets    {}", loaded.triplets.len());
    let _ = writeln!(report, "duplicates  {}", loaded.duplicates);
    let _ = writeln!(report, "entities    {}", vocab.num_entities());
    let _ = writeln!(report, "relations   {}", vocab.num_relations());
    let _ = writeln!(
        report,
        "split       {} / {} / {} (seed {}{})",
        manifest.train,
        manifest.valid,
        manifest.test,
        args.seed,
        if args.split_by_pair { ", by pair" } else { "" }
    );

    create_dir(&args.out)?;
    vocab.write_files(&args.out)?;
    write_atomic(
        &args.out.join(TRIPLETS_FILE),
        &tsv_bytes(vocab, &loaded.triplets)?,
    )?;
    write_atomic(&args.out.join(TRAIN_FILE), &tsv_bytes(vocab, &parts.train)?)?;
    write_atomic(&args.out.join(VALID_FILE), &tsv_bytes(vocab, &parts.valid)?)?;
    write_atomic(&args.out.join(TEST_FILE), &tsv_bytes(vocab, &parts.test)?)?;
    let manifest_text = toml::to_string(&manifest).expect("manifest serialises");
    write_atomic(&args.out.join(SPLIT_MANIFEST), manifest_text.as_bytes())?;
    write_atomic(&args.out.join(INGEST_REPORT), report.as_bytes())?;
    Ok(IngestSummary {
        manifest,
        triplets: loaded.triplets.len(),
        duplicates: loaded.duplicates,
        report,
    })
}
