use rayon::prelude::*;

use super::report::{LinkMetrics, MetricsReport, TaskMetrics};
use crate::error::{Error, Result};
use crate::kgstore::{DatasetSplit, FilterIndex, Side, Triplet};
use crate::scorers::EmbeddingModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankResult {
    pub triplet: Triplet,
    pub side: Side,
    /// 1-based; exact ties count half, so this can end in `.5`.
    pub rank: f64,
}

/// Rank of the true entity among all substitutions on `side`, ignoring
/// candidates that form another known triplet.
///
/// `rank = 1 + #(strictly higher) + #(exact ties) / 2`.
pub fn filtered_rank(
    model: &EmbeddingModel,
    filter: &FilterIndex,
    triplet: &Triplet,
    side: Side,
) -> Result<RankResult> {
    model.check(triplet)?;
    let scores = model.score_all_candidates(triplet, side)?;
    let truth = triplet.entity(side);
    let target = scores[truth];
    let known = filter.known_completions(triplet, side);
    let (mut higher, mut ties) = (0usize, 0usize);
    for (e, &s) in scores.iter().enumerate() {
        if e == truth || known.is_some_and(|k| k.contains(&e)) {
            continue;
        }
        if s > target {
            higher += 1;
        } else if s == target {
            ties += 1;
        }
    }
    Ok(RankResult {
        triplet: *triplet,
        side,
        rank: 1.0 + higher as f64 + ties as f64 / 2.0,
    })
}

/// Reference implementation of [`filtered_rank`]: materialises every
/// candidate, filters by scanning the split, sorts, and averages the
/// positions of the target's tie group. Quadratic; for small graphs only.
pub fn rank_oracle(
    model: &EmbeddingModel,
    split: &DatasetSplit,
    triplet: &Triplet,
    side: Side,
) -> Result<f64> {
    let truth = triplet.entity(side);
    let mut candidates = Vec::new();
    for e in 0..model.num_entities() {
        let cand = triplet.with_entity(side, e);
        if e != truth && split.all().any(|t| *t == cand) {
            continue;
        }
        candidates.push((e, model.score(&cand)?));
    }
    candidates.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let target = candidates
        .iter()
        .find(|(e, _)| *e == truth)
        .map(|(_, s)| *s)
        .expect("true entity is always a candidate");
    let first = candidates.iter().position(|(_, s)| *s == target).unwrap();
    let last = candidates.iter().rposition(|(_, s)| *s == target).unwrap();
    Ok((first + last) as f64 / 2.0 + 1.0)
}

/// Head and tail ranks for every test triplet, in test order (head first).
/// `workers > 1` fans out over a local thread pool; output order is fixed.
pub fn link_prediction_ranks(
    model: &EmbeddingModel,
    test: &[Triplet],
    filter: &FilterIndex,
    workers: usize,
) -> Result<Vec<RankResult>> {
    let queries: Vec<(Triplet, Side)> = test
        .iter()
        .flat_map(|t| Side::BOTH.map(|s| (*t, s)))
        .collect();
    let rank = |(t, s): &(Triplet, Side)| filtered_rank(model, filter, t, *s);
    if workers <= 1 {
        return queries.iter().map(rank).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Evaluation(format!("thread pool: {e}")))?;
    pool.install(|| queries.par_iter().map(rank).collect())
}

pub fn summarize_ranks(ranks: &[f64]) -> Result<LinkMetrics> {
    if ranks.is_empty() {
        return Err(Error::Evaluation("no ranks to summarise".into()));
    }
    let n = ranks.len() as f64;
    let hits = |k: f64| ranks.iter().filter(|&&r| r <= k).count() as f64 / n;
    Ok(LinkMetrics {
        mr: ranks.iter().sum::<f64>() / n,
        mrr: ranks.iter().map(|r| 1.0 / r).sum::<f64>() / n,
        hits_at_1: hits(1.0),
        hits_at_3: hits(3.0),
        hits_at_10: hits(10.0),
        max_rank: ranks.iter().copied().fold(1.0, f64::max),
        n_ranks: ranks.len(),
    })
}

/// MR, MRR and HITS@{1,3,10} over head and tail replacement of every test
/// triplet.
pub fn link_prediction_metrics(
    model: &EmbeddingModel,
    split: &DatasetSplit,
    filter: &FilterIndex,
) -> Result<MetricsReport> {
    if split.test.is_empty() {
        return Err(Error::Evaluation("empty test set".into()));
    }
    let ranks: Vec<f64> = link_prediction_ranks(model, &split.test, filter, 1)?
        .iter()
        .map(|r| r.rank)
        .collect();
    Ok(MetricsReport::new(TaskMetrics::LinkPrediction(
        summarize_ranks(&ranks)?,
    )))
}

/// Counts of (rounded-up) ranks `1..=max`, for plotting.
pub fn rank_histogram(ranks: &[RankResult]) -> Vec<(usize, usize)> {
    let max = ranks
        .iter()
        .map(|r| r.rank.ceil() as usize)
        .max()
        .unwrap_or(0);
    let mut counts = vec![0usize; max + 1];
    for r in ranks {
        counts[r.rank.ceil() as usize] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| *c > 0)
        .collect()
}
