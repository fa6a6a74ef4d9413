//! Binary checkpoint layout (all integers and floats little-endian):
//!
//! ```text
//! magic        4 bytes  "KGEM"
//! layout       u32      LAYOUT_VERSION
//! scorer tag   u8       0 TransE, 1 DistMult, 2 ComplEx, 3 SimplE, 4 RotatE
//! norm         u8       1 L1, 2 L2 (TransE), 0 otherwise
//! reserved     2 bytes  zero
//! |E|, |R|, d  3 × u64
//! entity table |E| × entity_width f64, row-major
//! relation table |R| × relation_width f64, row-major
//! ```

use std::path::Path;

use super::{EmbeddingModel, Norm, ScorerKind};
use crate::error::{Error, Result};
use crate::numkit::DenseMatrix;

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"KGEM";
pub const LAYOUT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 4 + 3 * 8;

fn tag(kind: ScorerKind) -> (u8, u8) {
    match kind {
        ScorerKind::TransE(Norm::L1) => (0, 1),
        ScorerKind::TransE(Norm::L2) => (0, 2),
        ScorerKind::DistMult => (1, 0),
        ScorerKind::ComplEx => (2, 0),
        ScorerKind::SimplE => (3, 0),
        ScorerKind::RotatE => (4, 0),
    }
}

fn untag(scorer: u8, norm: u8) -> Result<ScorerKind> {
    Ok(match (scorer, norm) {
        (0, 1) => ScorerKind::TransE(Norm::L1),
        (0, 2) => ScorerKind::TransE(Norm::L2),
        (1, 0) => ScorerKind::DistMult,
        (2, 0) => ScorerKind::ComplEx,
        (3, 0) => ScorerKind::SimplE,
        (4, 0) => ScorerKind::RotatE,
        _ => {
            return Err(Error::Checkpoint(format!(
                "unknown scorer tag {scorer}/{norm}"
            )))
        }
    })
}

impl EmbeddingModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let (scorer, norm) = tag(self.kind());
        let mut out = Vec::with_capacity(
            HEADER_LEN + 8 * (self.entities.data().len() + self.relations.data().len()),
        );
        out.extend_from_slice(CHECKPOINT_MAGIC);
        out.extend_from_slice(&LAYOUT_VERSION.to_le_bytes());
        out.extend_from_slice(&[scorer, norm, 0, 0]);
        for n in [self.num_entities(), self.num_relations(), self.dim()] {
            out.extend_from_slice(&(n as u64).to_le_bytes());
        }
        for v in self.parameters() {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN || &bytes[..4] != CHECKPOINT_MAGIC {
            return Err(Error::Checkpoint("not a checkpoint (bad magic)".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != LAYOUT_VERSION {
            return Err(Error::Checkpoint(format!(
                "layout version {version}, expected {LAYOUT_VERSION}"
            )));
        }
        let kind = untag(bytes[8], bytes[9])?;
        let read_u64 =
            |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().unwrap()) as usize;
        let (ne, nr, dim) = (read_u64(12), read_u64(20), read_u64(28));
        let ew = kind.entity_width(dim);
        let rw = kind.relation_width(dim);
        let expected = HEADER_LEN + 8 * (ne * ew + nr * rw);
        if bytes.len() != expected {
            return Err(Error::Checkpoint(format!(
                "expected {expected} bytes for {kind} |E|={ne} |R|={nr} d={dim}, got {}",
                bytes.len()
            )));
        }
        let floats: Vec<f64> = bytes[HEADER_LEN..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let (ent, rel) = floats.split_at(ne * ew);
        EmbeddingModel::new(
            kind,
            dim,
            DenseMatrix::new(ne, ew, ent.to_vec())?,
            DenseMatrix::new(nr, rw, rel.to_vec())?,
        )
    }
}

pub fn write_checkpoint(model: &EmbeddingModel, path: &Path) -> Result<()> {
    std::fs::write(path, model.to_bytes()).map_err(|e| Error::io(path, e))
}

pub fn read_checkpoint(path: &Path) -> Result<EmbeddingModel> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    EmbeddingModel::from_bytes(&bytes)
}
