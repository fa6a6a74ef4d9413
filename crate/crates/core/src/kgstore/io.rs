use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Triplet, Vocab};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LoadedDataset {
    pub vocab: Vocab,
    pub triplets: Vec<Triplet>,
    /// Lines dropped because the same triplet appeared earlier.
    pub duplicates: usize,
}

/// Reads `head<TAB>relation<TAB>tail` lines. LF and CRLF are both accepted;
/// blank lines are skipped.
pub fn load_tsv(path: &Path, has_header: bool) -> Result<LoadedDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_tsv(BufReader::new(file), has_header).map_err(|e| match e {
        Error::EmptyDataset(_) => Error::EmptyDataset(path.display().to_string()),
        other => other,
    })
}

pub fn parse_tsv<R: BufRead>(reader: R, has_header: bool) -> Result<LoadedDataset> {
    let mut vocab = Vocab::new();
    let mut triplets = Vec::new();
    let mut seen = HashSet::new();
    let mut duplicates = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if has_header && idx == 0 {
            continue;
        }
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::Parse {
                line: line_no,
                message: format!(
                    "expected head<TAB>relation<TAB>tail, found {} field(s)",
                    fields.len()
                ),
            });
        }
        let t = Triplet::new(
            vocab.intern_entity(fields[0]),
            vocab.intern_relation(fields[1]),
            vocab.intern_entity(fields[2]),
        );
        if seen.insert(t) {
            triplets.push(t);
        } else {
            duplicates += 1;
        }
    }
    if triplets.is_empty() {
        return Err(Error::EmptyDataset("no triplets found".into()));
    }
    Ok(LoadedDataset {
        vocab,
        triplets,
        duplicates,
    })
}

/// Writes triplets by name, one per line, LF terminated.
pub fn write_tsv<W: Write>(mut out: W, vocab: &Vocab, triplets: &[Triplet]) -> Result<()> {
    for t in triplets {
        let (h, r, tl) = (
            vocab.entity_name(t.head),
            vocab.relation_name(t.relation),
            vocab.entity_name(t.tail),
        );
        let (Some(h), Some(r), Some(tl)) = (h, r, tl) else {
            return Err(Error::Lookup(format!("{t:?} outside vocabulary")));
        };
        writeln!(out, "{h}\t{r}\t{tl}").map_err(|e| Error::io("<tsv writer>", e))?;
    }
    Ok(())
}
