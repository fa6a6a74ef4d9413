//! Triplet datasets: vocabularies, TSV ingestion, seeded splits, the filtered
//! evaluation index and synthetic clustered graphs.

mod filter;
mod io;
mod split;
mod synth;
mod vocab;

pub use filter::FilterIndex;
pub use io::{load_tsv, parse_tsv, write_tsv, LoadedDataset};
pub use split::{split, split_by_pair, DatasetSplit, SplitRatios};
pub use synth::{synth_kg, SynthParams};
pub use vocab::Vocab;

/// Integer-coded `(head, relation, tail)` fact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triplet {
    pub head: usize,
    pub relation: usize,
    pub tail: usize,
}

impl Triplet {
    pub const fn new(head: usize, relation: usize, tail: usize) -> Self {
        Self {
            head,
            relation,
            tail,
        }
    }

    pub fn entity(&self, side: Side) -> usize {
        match side {
            Side::Head => self.head,
            Side::Tail => self.tail,
        }
    }

    /// Copy with the entity on `side` replaced.
    pub fn with_entity(&self, side: Side, entity: usize) -> Self {
        match side {
            Side::Head => Self::new(entity, self.relation, self.tail),
            Side::Tail => Self::new(self.head, self.relation, entity),
        }
    }

    /// Unordered drug pair, smaller id first.
    pub fn pair(&self) -> (usize, usize) {
        (self.head.min(self.tail), self.head.max(self.tail))
    }
}

/// Which end of a triplet is replaced or predicted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Head,
    Tail,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Head, Side::Tail];

    pub fn as_str(&self) -> &'static str {
        match self {
            Side::Head => "head",
            Side::Tail => "tail",
        }
    }
}
