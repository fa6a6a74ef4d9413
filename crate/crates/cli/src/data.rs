//! On-disk layout of an ingested dataset and atomic file writes.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use ddikge_core::kgstore::{parse_tsv, write_tsv};
use ddikge_core::{DatasetSplit, Error, Triplet, Vocab};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const TRIPLETS_FILE: &str = "triplets.tsv";
pub const TRAIN_FILE: &str = "train.tsv";
pub const VALID_FILE: &str = "valid.tsv";
pub const TEST_FILE: &str = "test.tsv";
pub const SPLIT_MANIFEST: &str = "split.manifest";
pub const INGEST_REPORT: &str = "ingest_report.txt";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitManifest {
    pub seed: u64,
    pub by_pair: bool,
    pub entities: usize,
    pub relations: usize,
    pub train: usize,
    pub valid: usize,
    pub test: usize,
}

/// Writes through a sibling temp file and a rename, so readers never see a
/// half-written artifact.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let name = path
        .file_name()
        .ok_or_else(|| CliError::usage(format!("{}: not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    std::fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn tsv_bytes(vocab: &Vocab, triplets: &[Triplet]) -> CliResult<Vec<u8>> {
    let mut out = Vec::new();
    write_tsv(&mut out, vocab, triplets)?;
    Ok(out)
}

/// Reads a named triplet file against an existing vocabulary. An empty file
/// is an empty list.
pub fn read_named_triplets(path: &Path, vocab: &Vocab) -> CliResult<Vec<Triplet>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let loaded = match parse_tsv(BufReader::new(file), false) {
        Ok(l) => l,
        Err(Error::EmptyDataset(_)) => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let unknown = |kind: &str, name: &str| {
        Error::Lookup(format!("{}: unknown {kind} `{name}`", path.display()))
    };
    loaded
        .triplets
        .iter()
        .map(|t| {
            let name = |id: usize| loaded.vocab.entity_name(id).expect("local id");
            let rel = loaded.vocab.relation_name(t.relation).expect("local id");
            let h = vocab
                .entity_id(name(t.head))
                .ok_or_else(|| unknown("entity", name(t.head)))?;
            let r = vocab
                .relation_id(rel)
                .ok_or_else(|| unknown("relation", rel))?;
            let tl = vocab
                .entity_id(name(t.tail))
                .ok_or_else(|| unknown("entity", name(t.tail)))?;
            Ok(Triplet::new(h, r, tl))
        })
        .collect()
}

pub fn read_manifest(dir: &Path) -> CliResult<SplitManifest> {
    let path = dir.join(SPLIT_MANIFEST);
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    toml::from_str(&text).map_err(|e| {
        CliError::Core(Error::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })
    })
}

/// Vocabulary and split of an ingested dataset directory.
pub fn load_data(dir: &Path) -> CliResult<(Vocab, DatasetSplit)> {
    if !dir.is_dir() {
        return Err(CliError::usage(format!(
            "{}: not a dataset directory",
            dir.display()
        )));
    }
    let vocab = Vocab::read_files(dir)?;
    let manifest = read_manifest(dir)?;
    let read = |name: &str| read_named_triplets(&dir.join(name), &vocab);
    let split = DatasetSplit {
        train: read(TRAIN_FILE)?,
        valid: read(VALID_FILE)?,
        test: read(TEST_FILE)?,
        seed: manifest.seed,
    };
    let counts = (split.train.len(), split.valid.len(), split.test.len());
    if counts != (manifest.train, manifest.valid, manifest.test) {
        return Err(Error::Split(format!(
            "{}: split files hold {counts:?} triplets, manifest says ({}, {}, {})",
            dir.display(),
            manifest.train,
            manifest.valid,
            manifest.test
        ))
        .into());
    }
    Ok((vocab, split))
}

pub fn sibling(path: &Path, name: &str) -> PathBuf {
    path.parent().unwrap_or(Path::new(".")).join(name)
}
