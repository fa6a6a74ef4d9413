//! Negative-triplet sources.
//!
//! * [`uniform_corrupt`]: replace the head or tail with a uniformly drawn
//!   different entity.
//! * [`self_adversarial_weights`]: softmax over the current model's scores of
//!   a set of negatives, used as constant loss weights.
//! * [`GeneratorParams`] / [`DecoderParams`]: a convolutional encoder that
//!   proposes a replacement entity through a Gumbel-Softmax relaxation, and a
//!   two-layer linear decoder that reconstructs the encoder's inputs.

mod decoder;
mod generator;

pub use decoder::{
    reconstruction_loss, DecoderGrads, DecoderOptimizer, DecoderParams, DecoderPass,
};
pub use generator::{
    feature_len, GeneratorConfig, GeneratorGrads, GeneratorOptimizer, GeneratorParams,
    GeneratorPass,
};

use crate::error::{Error, Result};
use crate::kgstore::{Side, Triplet};
use crate::numkit::{gumbel_noise, softmax, RngStream};
use crate::scorers::EmbeddingModel;

#[derive(Debug, Clone, PartialEq)]
pub struct NegativeSample {
    pub corrupted: Triplet,
    /// Relaxed one-hot over entities; only produced by the generator.
    pub soft_onehot: Option<Vec<f64>>,
    pub corrupted_side: Side,
}

/// Index of the first maximum.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Head or tail (probability ½ each) replaced by an entity drawn uniformly
/// from all entities except the original one.
pub fn uniform_corrupt(
    triplet: &Triplet,
    n_entities: usize,
    rng: &mut RngStream,
) -> Result<NegativeSample> {
    if n_entities < 2 {
        return Err(Error::Sampler(format!(
            "uniform corruption needs at least 2 entities, have {n_entities}"
        )));
    }
    let side = if rng.coin() { Side::Head } else { Side::Tail };
    let original = triplet.entity(side);
    let mut replacement = rng.below(n_entities - 1);
    if replacement >= original {
        replacement += 1;
    }
    Ok(NegativeSample {
        corrupted: triplet.with_entity(side, replacement),
        soft_onehot: None,
        corrupted_side: side,
    })
}

/// `softmax(α · scores)`. With `α = 0` the weights are uniform.
pub fn softmax_weights(scores: &[f64], temperature: f64) -> Result<Vec<f64>> {
    if !(temperature >= 0.0) {
        return Err(Error::Domain(format!(
            "sampling temperature must be non-negative, got {temperature}"
        )));
    }
    let scaled: Vec<f64> = scores.iter().map(|s| temperature * s).collect();
    softmax(&scaled, 1.0)
}

/// Self-adversarial loss weights for `negatives` under the current model.
pub fn self_adversarial_weights(
    model: &EmbeddingModel,
    negatives: &[Triplet],
    temperature: f64,
) -> Result<Vec<f64>> {
    if negatives.is_empty() {
        return Err(Error::Sampler("no negatives to weight".into()));
    }
    let scores = negatives
        .iter()
        .map(|t| model.score(t))
        .collect::<Result<Vec<_>>>()?;
    softmax_weights(&scores, temperature)
}

/// `ŷ = softmax((o + g) / τ)` for a given noise vector `g`.
pub fn gumbel_softmax_with_noise(logits: &[f64], noise: &[f64], tau: f64) -> Result<Vec<f64>> {
    if logits.len() != noise.len() {
        return Err(Error::Shape(format!(
            "{} logits but {} noise values",
            logits.len(),
            noise.len()
        )));
    }
    let perturbed: Vec<f64> = logits.iter().zip(noise).map(|(o, g)| o + g).collect();
    softmax(&perturbed, tau)
}

/// Gumbel-Softmax sample with fresh standard Gumbel noise.
pub fn gumbel_softmax_sample(logits: &[f64], tau: f64, rng: &mut RngStream) -> Result<Vec<f64>> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    let noise = gumbel_noise(logits.len(), rng);
    gumbel_softmax_with_noise(logits, &noise, tau)
}

/// `ŷᵀ · entity_table`: convex combination of entity rows.
pub fn soft_embedding_lookup(model: &EmbeddingModel, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != model.num_entities() {
        return Err(Error::Shape(format!(
            "soft one-hot of length {} for {} entities",
            y.len(),
            model.num_entities()
        )));
    }
    Ok(model.entities.vec_mul(y))
}
