use std::path::{Path, PathBuf};

use ddikge_core::numkit::DenseMatrix;
use ddikge_core::scorers::read_checkpoint;
use ddikge_core::{EmbeddingModel, Error, ScorerKind};

use super::eval::check_dimensions;
use crate::cli::ExportArgs;
use crate::data::{create_dir, load_data, write_atomic};
use crate::error::CliResult;

pub const ENTITIES_CSV: &str = "entities.csv";
pub const RELATIONS_CSV: &str = "relations.csv";

fn table_csv(names: &[String], table: &DenseMatrix) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header: Vec<String> = std::iter::once("name".to_string())
        .chain((0..table.cols()).map(|i| i.to_string()))
        .collect();
    let csv_err = |e: csv::Error| Error::Checkpoint(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for (i, name) in names.iter().enumerate() {
        let row = std::iter::once(name.clone()).chain(table.row(i).iter().map(|v| v.to_string()));
        w.write_record(row).map_err(csv_err)?;
    }
    Ok(w.into_inner()
        .map_err(|e| Error::Checkpoint(format!("csv: {e}")))?)
}

/// Writes one row per entity and per relation: the name, then the stored
/// values. Returns the two file paths.
pub fn cmd_export(args: &ExportArgs) -> CliResult<(PathBuf, PathBuf)> {
    let model = read_checkpoint(&args.checkpoint)?;
    let (vocab, _) = load_data(&args.data)?;
    check_dimensions(&model, &vocab)?;
    create_dir(&args.out)?;
    let (e, r) = (args.out.join(ENTITIES_CSV), args.out.join(RELATIONS_CSV));
    write_atomic(&e, &table_csv(vocab.entity_names(), &model.entities)?)?;
    write_atomic(&r, &table_csv(vocab.relation_names(), &model.relations)?)?;
    Ok((e, r))
}

/// Reads an exported CSV back into names and a table.
pub fn import_embeddings(path: &Path) -> CliResult<(Vec<String>, DenseMatrix)> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
    let width = reader
        .headers()
        .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?
        .len()
        .saturating_sub(1);
    let mut names = Vec::new();
    let mut data = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        let bad = |m: String| Error::Parse {
            line: i + 2,
            message: m,
        };
        if record.len() != width + 1 {
            return Err(bad(format!("{} fields, expected {}", record.len(), width + 1)).into());
        }
        names.push(record[0].to_string());
        for field in record.iter().skip(1) {
            data.push(
                field
                    .parse::<f64>()
                    .map_err(|e| bad(format!("`{field}`: {e}")))?,
            );
        }
    }
    let table = DenseMatrix::new(names.len(), width, data)?;
    Ok((names, table))
}

/// Rebuilds a model from the two exported files.
pub fn import_model(
    kind: ScorerKind,
    dim: usize,
    entities: &Path,
    relations: &Path,
) -> CliResult<EmbeddingModel> {
    let (_, e) = import_embeddings(entities)?;
    let (_, r) = import_embeddings(relations)?;
    Ok(EmbeddingModel::new(kind, dim, e, r)?)
}
