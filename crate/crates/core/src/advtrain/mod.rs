//! Adversarial training with a Wasserstein critic, plus the uniform and
//! self-adversarial negative-sampling baselines.
//!
//! Each mini-batch of the adversarial loop runs three phases in order:
//! an autoencoder step on the generator and decoder, `n_dis` critic steps
//! followed by weight clipping, and one generator step against the frozen
//! critic. The critic is the embedding model itself.

mod baseline;
mod config;
mod phases;
mod trainer;

pub use baseline::{baseline_loss, baseline_weights, update_baseline, BaselineItem};
pub use config::{ClipScope, SamplerKind, TrainConfig, PRESET_NAMES};
pub use phases::{
    autoencoder_gradients, autoencoder_loss, discriminator_gradients, discriminator_loss,
    generator_gradients, generator_loss, update_autoencoder, update_discriminator,
    update_generator, BatchItem, ModelGrads, ModelOptimizer,
};
pub use trainer::{train, train_baseline, EpochReport, ParamNorms, Trainer, EPOCH_CSV_HEADER};
