use std::collections::{BTreeSet, HashMap};

use super::report::{ClassificationMetrics, MetricsReport, TaskMetrics};
use crate::error::{Error, Result};
use crate::kgstore::{DatasetSplit, Triplet};
use crate::scorers::EmbeddingModel;

/// Scores and ground-truth labels for one test pair across every relation.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDecision {
    pub pair: (usize, usize),
    pub scores: Vec<f64>,
    pub labels: Vec<bool>,
}

#[derive(Debug, Clone)]
pub struct ClassificationOutcome {
    pub report: MetricsReport,
    pub decisions: Vec<PairDecision>,
}

fn unordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Multi-label classification over the first `n_relations` relations for
/// every distinct drug pair in the test split.
///
/// A pair scores `max` over both orientations; its labels are the relations
/// observed for it anywhere in the split. Pairs with no true label inside the
/// universe are dropped and counted.
pub fn ddi_classification(
    model: &EmbeddingModel,
    split: &DatasetSplit,
    n_relations: usize,
) -> Result<ClassificationOutcome> {
    if n_relations == 0 || n_relations > model.num_relations() {
        return Err(Error::Evaluation(format!(
            "label universe of {n_relations} relations (model has {})",
            model.num_relations()
        )));
    }
    if split.test.is_empty() {
        return Err(Error::Evaluation("empty test set".into()));
    }
    let mut truth: HashMap<(usize, usize), BTreeSet<usize>> = HashMap::new();
    for t in split.all() {
        truth
            .entry(unordered(t.head, t.tail))
            .or_default()
            .insert(t.relation);
    }
    let mut seen = BTreeSet::new();
    let mut decisions = Vec::new();
    let mut excluded = 0;
    for t in &split.test {
        let pair = unordered(t.head, t.tail);
        if !seen.insert(pair) {
            continue;
        }
        let known = &truth[&pair];
        let labels: Vec<bool> = (0..n_relations).map(|r| known.contains(&r)).collect();
        if !labels.contains(&true) {
            excluded += 1;
            continue;
        }
        let scores = (0..n_relations)
            .map(|r| {
                let fwd = model.score(&Triplet::new(pair.0, r, pair.1))?;
                let bwd = model.score(&Triplet::new(pair.1, r, pair.0))?;
                Ok(fwd.max(bwd))
            })
            .collect::<Result<Vec<f64>>>()?;
        decisions.push(PairDecision {
            pair,
            scores,
            labels,
        });
    }
    if decisions.is_empty() {
        return Err(Error::Evaluation("every test pair was excluded".into()));
    }
    let flat_scores: Vec<f64> = decisions
        .iter()
        .flat_map(|d| d.scores.iter().copied())
        .collect();
    let flat_labels: Vec<bool> = decisions
        .iter()
        .flat_map(|d| d.labels.iter().copied())
        .collect();
    let undefined = || Error::Evaluation("AUC undefined: decisions are all one class".into());
    let p_at = |k| {
        decisions
            .iter()
            .map(|d| precision_at_k(&d.scores, &d.labels, k))
            .sum::<f64>()
            / decisions.len() as f64
    };
    let metrics = ClassificationMetrics {
        roc_auc: roc_auc(&flat_scores, &flat_labels).ok_or_else(undefined)?,
        pr_auc: pr_auc(&flat_scores, &flat_labels).ok_or_else(undefined)?,
        p_at_1: p_at(1),
        p_at_3: p_at(3),
        p_at_5: p_at(5),
        n_pairs: decisions.len(),
        n_decisions: flat_scores.len(),
        excluded_pairs: excluded,
    };
    Ok(ClassificationOutcome {
        report: MetricsReport::new(TaskMetrics::Classification(metrics)),
        decisions,
    })
}

/// Fraction of true labels among the `k` top-scored relations (ties broken by
/// relation id); the denominator is always `k`.
pub fn precision_at_k(scores: &[f64], labels: &[bool], k: usize) -> f64 {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.iter().take(k).filter(|&&i| labels[i]).count() as f64 / k as f64
}

fn class_counts(labels: &[bool]) -> Option<(u64, u64)> {
    let p = labels.iter().filter(|&&l| l).count() as u64;
    let n = labels.len() as u64 - p;
    (p > 0 && n > 0).then_some((p, n))
}

/// Indices sorted by descending score, grouped into runs of equal score.
fn descending_groups(scores: &[f64]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if scores[g[0]] == scores[i] => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    groups
}

/// Exact ROC-AUC via the Mann-Whitney rank sum; ties count one half.
/// `None` when either class is empty.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let (p, n) = class_counts(labels)?;
    // ascending positions, 1-based; twice the mid-rank of a tie group spanning
    // [lo, hi] is lo + hi, so the doubled rank sum stays integral
    let mut groups = descending_groups(scores);
    groups.reverse();
    let mut lo: u128 = 1;
    let mut twice_rank_sum: u128 = 0;
    for g in &groups {
        let hi = lo + g.len() as u128 - 1;
        let pos = g.iter().filter(|&&i| labels[i]).count() as u128;
        twice_rank_sum += pos * (lo + hi);
        lo = hi + 1;
    }
    let (p, n) = (p as u128, n as u128);
    let twice_u = twice_rank_sum - p * (p + 1);
    Some(twice_u as f64 / (2 * p * n) as f64)
}

/// Area under the step precision-recall curve (average precision).
pub fn pr_auc(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let (p, _) = class_counts(labels)?;
    let (mut tp, mut fp, mut ap) = (0u64, 0u64, 0.0);
    for g in descending_groups(scores) {
        let gp = g.iter().filter(|&&i| labels[i]).count() as u64;
        tp += gp;
        fp += g.len() as u64 - gp;
        if gp > 0 {
            ap += (gp as f64 / p as f64) * (tp as f64 / (tp + fp) as f64);
        }
    }
    Some(ap)
}

fn distinct_thresholds(scores: &[f64]) -> Vec<f64> {
    let mut t = scores.to_vec();
    t.sort_by(|a, b| b.total_cmp(a));
    t.dedup();
    t
}

fn counts_at(scores: &[f64], labels: &[bool], threshold: f64) -> (u64, u64) {
    let tp = (0..scores.len())
        .filter(|&i| scores[i] >= threshold && labels[i])
        .count();
    let fp = (0..scores.len())
        .filter(|&i| scores[i] >= threshold && !labels[i])
        .count();
    (tp as u64, fp as u64)
}

/// ROC-AUC by sweeping every distinct threshold and integrating the curve
/// with the trapezoid rule. Quadratic.
pub fn roc_auc_oracle(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let (p, n) = class_counts(labels)?;
    let (mut prev_tp, mut prev_fp) = (0u64, 0u64);
    // twice the area, in units of 1/(p*n)
    let mut twice_area: u128 = 0;
    for th in distinct_thresholds(scores) {
        let (tp, fp) = counts_at(scores, labels, th);
        twice_area += (fp - prev_fp) as u128 * (tp + prev_tp) as u128;
        (prev_tp, prev_fp) = (tp, fp);
    }
    Some(twice_area as f64 / (2 * p as u128 * n as u128) as f64)
}

/// Average precision from a full threshold sweep. Quadratic.
pub fn pr_auc_oracle(scores: &[f64], labels: &[bool]) -> Option<f64> {
    let (p, _) = class_counts(labels)?;
    let mut prev_tp = 0u64;
    let mut ap = 0.0;
    for th in distinct_thresholds(scores) {
        let (tp, fp) = counts_at(scores, labels, th);
        let gained = tp - prev_tp;
        if gained > 0 {
            ap += (gained as f64 / p as f64) * (tp as f64 / (tp + fp) as f64);
        }
        prev_tp = tp;
    }
    Some(ap)
}

/// `(fpr, tpr)` points from `(0, 0)` to `(1, 1)`.
pub fn roc_curve(scores: &[f64], labels: &[bool]) -> Vec<(f64, f64)> {
    let Some((p, n)) = class_counts(labels) else {
        return Vec::new();
    };
    let mut points = vec![(0.0, 0.0)];
    let (mut tp, mut fp) = (0u64, 0u64);
    for g in descending_groups(scores) {
        let gp = g.iter().filter(|&&i| labels[i]).count() as u64;
        tp += gp;
        fp += g.len() as u64 - gp;
        points.push((fp as f64 / n as f64, tp as f64 / p as f64));
    }
    points
}

/// `(recall, precision)` at each distinct threshold.
pub fn pr_curve(scores: &[f64], labels: &[bool]) -> Vec<(f64, f64)> {
    let Some((p, _)) = class_counts(labels) else {
        return Vec::new();
    };
    let (mut tp, mut fp) = (0u64, 0u64);
    descending_groups(scores)
        .into_iter()
        .map(|g| {
            let gp = g.iter().filter(|&&i| labels[i]).count() as u64;
            tp += gp;
            fp += g.len() as u64 - gp;
            (tp as f64 / p as f64, tp as f64 / (tp + fp) as f64)
        })
        .collect()
}
