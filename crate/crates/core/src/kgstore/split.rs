use std::collections::HashMap;

use super::Triplet;
use crate::error::{Error, Result};
use crate::numkit::RngStream;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitRatios {
    pub train: f64,
    pub valid: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self {
            train: 0.8,
            valid: 0.1,
            test: 0.1,
        }
    }
}

impl SplitRatios {
    fn validate(&self) -> Result<()> {
        let all = [self.train, self.valid, self.test];
        if all.iter().any(|r| !(*r > 0.0)) {
            return Err(Error::Split(format!("ratios must be positive: {self:?}")));
        }
        if (all.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::Split(format!("ratios must sum to 1: {self:?}")));
        }
        Ok(())
    }

    /// Floor allocation for valid and test; the remainder goes to train.
    fn counts(&self, n: usize) -> (usize, usize, usize) {
        let valid = (n as f64 * self.valid).floor() as usize;
        let test = (n as f64 * self.test).floor() as usize;
        (n - valid - test, valid, test)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSplit {
    pub train: Vec<Triplet>,
    pub valid: Vec<Triplet>,
    pub test: Vec<Triplet>,
    pub seed: u64,
}

impl DatasetSplit {
    pub fn all(&self) -> impl Iterator<Item = &Triplet> {
        self.train.iter().chain(&self.valid).chain(&self.test)
    }

    pub fn len(&self) -> usize {
        self.train.len() + self.valid.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Seeded shuffle, then contiguous train/valid/test partition.
pub fn split(triplets: &[Triplet], ratios: SplitRatios, seed: u64) -> Result<DatasetSplit> {
    ratios.validate()?;
    if triplets.len() < 3 {
        return Err(Error::Split(format!(
            "need at least 3 triplets, got {}",
            triplets.len()
        )));
    }
    let mut order = triplets.to_vec();
    RngStream::new(seed).shuffle(&mut order);
    let (n_train, n_valid, _) = ratios.counts(order.len());
    let test = order.split_off(n_train + n_valid);
    let valid = order.split_off(n_train);
    Ok(DatasetSplit {
        train: order,
        valid,
        test,
        seed,
    })
}

/// Like [`split`], but every triplet of an unordered drug pair lands in the
/// same bucket. Ratios apply to pairs rather than triplets.
pub fn split_by_pair(triplets: &[Triplet], ratios: SplitRatios, seed: u64) -> Result<DatasetSplit> {
    ratios.validate()?;
    let mut group_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut groups: Vec<Vec<Triplet>> = Vec::new();
    for t in triplets {
        let g = *group_of.entry(t.pair()).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(*t);
    }
    if groups.len() < 3 {
        return Err(Error::Split(format!(
            "need at least 3 drug pairs, got {}",
            groups.len()
        )));
    }
    RngStream::new(seed).shuffle(&mut groups);
    let (n_train, n_valid, _) = ratios.counts(groups.len());
    let mut out = DatasetSplit {
        train: Vec::new(),
        valid: Vec::new(),
        test: Vec::new(),
        seed,
    };
    for (i, g) in groups.into_iter().enumerate() {
        let bucket = if i < n_train {
            &mut out.train
        } else if i < n_train + n_valid {
            &mut out.valid
        } else {
            &mut out.test
        };
        bucket.extend(g);
    }
    Ok(out)
}
