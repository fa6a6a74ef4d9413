use std::collections::{HashMap, HashSet};

use super::{DatasetSplit, Side, Triplet};

/// Known true triplets indexed by `(head, relation)` and `(relation, tail)`.
#[derive(Debug, Clone, Default)]
pub struct FilterIndex {
    tails: HashMap<(usize, usize), HashSet<usize>>,
    heads: HashMap<(usize, usize), HashSet<usize>>,
}

impl FilterIndex {
    /// Index over train ∪ valid ∪ test.
    pub fn build(split: &DatasetSplit) -> Self {
        Self::from_triplets(split.all())
    }

    pub fn from_triplets<'a>(triplets: impl IntoIterator<Item = &'a Triplet>) -> Self {
        let mut index = Self::default();
        for t in triplets {
            index.insert(*t);
        }
        index
    }

    pub fn insert(&mut self, t: Triplet) {
        self.tails
            .entry((t.head, t.relation))
            .or_default()
            .insert(t.tail);
        self.heads
            .entry((t.relation, t.tail))
            .or_default()
            .insert(t.head);
    }

    pub fn contains(&self, t: &Triplet) -> bool {
        self.tails
            .get(&(t.head, t.relation))
            .is_some_and(|s| s.contains(&t.tail))
    }

    pub fn known_tails(&self, head: usize, relation: usize) -> Option<&HashSet<usize>> {
        self.tails.get(&(head, relation))
    }

    pub fn known_heads(&self, relation: usize, tail: usize) -> Option<&HashSet<usize>> {
        self.heads.get(&(relation, tail))
    }

    /// Entities that complete `t` on `side` into a known triplet.
    pub fn known_completions(&self, t: &Triplet, side: Side) -> Option<&HashSet<usize>> {
        match side {
            Side::Tail => self.known_tails(t.head, t.relation),
            Side::Head => self.known_heads(t.relation, t.tail),
        }
    }

    pub fn len(&self) -> usize {
        self.tails.values().map(HashSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.is_empty()
    }
}
