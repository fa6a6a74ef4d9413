use super::config::SamplerKind;
use super::phases::{add_row, ModelGrads, ModelOptimizer};
use crate::error::{Error, Result};
use crate::kgstore::Triplet;
use crate::negsamplers::self_adversarial_weights;
use crate::scorers::EmbeddingModel;

/// A positive triplet with its corrupted counterparts.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineItem {
    pub positive: Triplet,
    pub negatives: Vec<Triplet>,
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn log_sigmoid(x: f64) -> f64 {
    -((-x).max(0.0) + (-x.abs()).exp().ln_1p())
}

/// `1/k` each for uniform sampling, `softmax(α · score)` for self-adversarial.
/// The weights are treated as constants by the gradient.
pub fn baseline_weights(
    model: &EmbeddingModel,
    negatives: &[Triplet],
    sampler: SamplerKind,
    temperature: f64,
) -> Result<Vec<f64>> {
    match sampler {
        SamplerKind::Uniform if !negatives.is_empty() => {
            Ok(vec![1.0 / negatives.len() as f64; negatives.len()])
        }
        SamplerKind::SelfAdversarial => self_adversarial_weights(model, negatives, temperature),
        SamplerKind::Uniform => Err(Error::Sampler("no negatives to weight".into())),
        SamplerKind::Aae => Err(Error::Config("the aae sampler has no baseline loss".into())),
    }
}

fn item_loss(
    model: &EmbeddingModel,
    item: &BaselineItem,
    sampler: SamplerKind,
    margin: f64,
    temperature: f64,
) -> Result<(f64, Vec<f64>)> {
    let weights = baseline_weights(model, &item.negatives, sampler, temperature)?;
    let mut loss = -log_sigmoid(margin + model.score(&item.positive)?);
    for (t, w) in item.negatives.iter().zip(&weights) {
        loss -= w * log_sigmoid(-margin - model.score(t)?);
    }
    Ok((loss, weights))
}

/// Mean of `−ln σ(γ + s⁺) − Σ wᵢ ln σ(−γ − sᵢ⁻)` over the batch.
pub fn baseline_loss(
    model: &EmbeddingModel,
    batch: &[BaselineItem],
    sampler: SamplerKind,
    margin: f64,
    temperature: f64,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Training("empty batch".into()));
    }
    let mut total = 0.0;
    for item in batch {
        total += item_loss(model, item, sampler, margin, temperature)?.0;
    }
    let loss = total / batch.len() as f64;
    if loss.is_finite() {
        Ok(loss)
    } else {
        Err(Error::Training("non-finite baseline loss".into()))
    }
}

/// One Adagrad step on the baseline loss. Returns the loss before the step.
pub fn update_baseline(
    model: &mut EmbeddingModel,
    batch: &[BaselineItem],
    opt: &mut ModelOptimizer,
    lr: f64,
    sampler: SamplerKind,
    margin: f64,
    temperature: f64,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Training("empty batch".into()));
    }
    let scale = 1.0 / batch.len() as f64;
    let mut grads = ModelGrads::default();
    let mut total = 0.0;
    let mut accumulate = |model: &EmbeddingModel, t: &Triplet, coeff: f64| -> Result<()> {
        let g = model.score_gradients(t)?;
        add_row(&mut grads.entities, t.head, &g.head, coeff);
        add_row(&mut grads.entities, t.tail, &g.tail, coeff);
        add_row(&mut grads.relations, t.relation, &g.relation, coeff);
        Ok(())
    };
    for item in batch {
        let (loss, weights) = item_loss(model, item, sampler, margin, temperature)?;
        total += loss;
        let pos = model.score(&item.positive)?;
        accumulate(model, &item.positive, -scale * sigmoid(-margin - pos))?;
        for (t, w) in item.negatives.iter().zip(&weights) {
            let neg = model.score(t)?;
            accumulate(model, t, scale * w * sigmoid(margin + neg))?;
        }
    }
    let loss = total * scale;
    if !loss.is_finite() {
        return Err(Error::Training("non-finite baseline loss".into()));
    }
    opt.apply(model, &grads, lr)?;
    Ok(loss)
}
