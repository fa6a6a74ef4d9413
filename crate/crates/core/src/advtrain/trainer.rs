use std::time::Instant;

use super::baseline::{update_baseline, BaselineItem};
use super::config::{ClipScope, SamplerKind, TrainConfig};
use super::phases::{
    update_autoencoder, update_discriminator, update_generator, BatchItem, ModelOptimizer,
};
use crate::error::{Error, Result};
use crate::kgstore::{DatasetSplit, Triplet};
use crate::negsamplers::{
    uniform_corrupt, DecoderOptimizer, DecoderParams, GeneratorOptimizer, GeneratorParams,
};
use crate::numkit::RngStream;
use crate::scorers::EmbeddingModel;

pub const EPOCH_CSV_HEADER: &str =
    "epoch,l_ga,l_d,l_g,seconds,entity_norm,relation_norm,generator_norm";

/// Frobenius norms after the epoch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamNorms {
    pub entities: f64,
    pub relations: f64,
    /// Zero for the baselines.
    pub generator: f64,
}

/// Per-epoch means. For the baselines `l_d` holds the sampling loss and the
/// other two losses are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochReport {
    /// 1-based.
    pub epoch: usize,
    pub l_ga: f64,
    pub l_d: f64,
    pub l_g: f64,
    pub seconds: f64,
    pub norms: ParamNorms,
}

impl EpochReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.3},{},{},{}",
            self.epoch,
            self.l_ga,
            self.l_d,
            self.l_g,
            self.seconds,
            self.norms.entities,
            self.norms.relations,
            self.norms.generator
        )
    }

    pub fn is_finite(&self) -> bool {
        [
            self.l_ga,
            self.l_d,
            self.l_g,
            self.norms.entities,
            self.norms.relations,
            self.norms.generator,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

fn frobenius(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone)]
struct Adversary {
    gen: GeneratorParams,
    dec: DecoderParams,
    gen_opt: GeneratorOptimizer,
    dec_opt: DecoderOptimizer,
}

/// Owns the whole training state. Every random draw comes from one seeded
/// stream, so a config, seed and training set fix the trajectory.
#[derive(Debug, Clone)]
pub struct Trainer {
    config: TrainConfig,
    train: Vec<Triplet>,
    model: EmbeddingModel,
    model_opt: ModelOptimizer,
    adversary: Option<Adversary>,
    rng: RngStream,
    epoch: usize,
}

impl Trainer {
    pub fn new(
        config: TrainConfig,
        n_entities: usize,
        n_relations: usize,
        train: &[Triplet],
    ) -> Result<Self> {
        config.validate()?;
        if train.is_empty() {
            return Err(Error::EmptyDataset("no training triplets".into()));
        }
        if n_entities < 2 {
            return Err(Error::EmptyDataset(format!(
                "{n_entities} entities; need at least 2"
            )));
        }
        if let Some(t) = train
            .iter()
            .find(|t| t.head >= n_entities || t.tail >= n_entities || t.relation >= n_relations)
        {
            return Err(Error::Lookup(format!(
                "{t:?} outside {n_entities} entities / {n_relations} relations"
            )));
        }
        let mut rng = RngStream::new(config.seed);
        let model = EmbeddingModel::init(
            config.scorer,
            n_entities,
            n_relations,
            config.dim,
            &mut rng.fork(),
        )?;
        let adversary = match config.sampler {
            SamplerKind::Aae => {
                let gen = GeneratorParams::init(
                    n_entities,
                    n_relations,
                    &config.generator_config(),
                    &mut rng.fork(),
                )?;
                let dec = DecoderParams::init(
                    n_entities,
                    n_relations,
                    config.decoder_width(),
                    &mut rng.fork(),
                )?;
                Some(Adversary {
                    gen_opt: GeneratorOptimizer::new(&gen),
                    dec_opt: DecoderOptimizer::new(&dec),
                    gen,
                    dec,
                })
            }
            _ => None,
        };
        Ok(Self {
            model_opt: ModelOptimizer::new(&model),
            config,
            train: train.to_vec(),
            model,
            adversary,
            rng,
            epoch: 0,
        })
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn model(&self) -> &EmbeddingModel {
        &self.model
    }

    pub fn into_model(self) -> EmbeddingModel {
        self.model
    }

    pub fn generator(&self) -> Option<&GeneratorParams> {
        self.adversary.as_ref().map(|a| &a.gen)
    }

    pub fn decoder(&self) -> Option<&DecoderParams> {
        self.adversary.as_ref().map(|a| &a.dec)
    }

    pub fn epochs_done(&self) -> usize {
        self.epoch
    }

    /// One shuffled pass over the training triplets.
    pub fn run_epoch(&mut self) -> Result<EpochReport> {
        self.run_epoch_observed(&mut |_| {})
    }

    /// Like [`Trainer::run_epoch`], calling `after_critic` with the critic's
    /// embeddings after every discriminator update.
    pub fn run_epoch_observed(
        &mut self,
        after_critic: &mut dyn FnMut(&EmbeddingModel),
    ) -> Result<EpochReport> {
        let start = Instant::now();
        let epoch = self.epoch + 1;
        let mut order: Vec<usize> = (0..self.train.len()).collect();
        self.rng.shuffle(&mut order);
        let mut sums = [0.0; 3];
        let mut batches = 0usize;
        for (b, chunk) in order.chunks(self.config.batch_size).enumerate() {
            let triplets: Vec<Triplet> = chunk.iter().map(|&i| self.train[i]).collect();
            let losses = if self.adversary.is_some() {
                self.adversarial_batch(&triplets, after_critic)
            } else {
                self.baseline_batch(&triplets).map(|l| [0.0, l, 0.0])
            }
            .map_err(|e| e.with_context(format!("epoch {epoch} batch {b}")))?;
            for (s, l) in sums.iter_mut().zip(losses) {
                *s += l;
            }
            batches += 1;
        }
        self.epoch = epoch;
        let n = batches as f64;
        let report = EpochReport {
            epoch,
            l_ga: sums[0] / n,
            l_d: sums[1] / n,
            l_g: sums[2] / n,
            seconds: start.elapsed().as_secs_f64(),
            norms: ParamNorms {
                entities: frobenius(self.model.entities.data()),
                relations: frobenius(self.model.relations.data()),
                generator: self
                    .adversary
                    .as_ref()
                    .map_or(0.0, |a| frobenius(&a.gen.flat_params())),
            },
        };
        if !report.is_finite() {
            return Err(Error::Training(format!("epoch {epoch}: non-finite report")));
        }
        Ok(report)
    }

    fn draw(&mut self, triplets: &[Triplet]) -> Vec<BatchItem> {
        let ne = self.model.num_entities();
        triplets
            .iter()
            .map(|t| BatchItem::draw(*t, ne, &mut self.rng))
            .collect()
    }

    /// Autoencoder step, `n_dis` critic steps, generator step; each phase
    /// draws its own sides and noise.
    fn adversarial_batch(
        &mut self,
        triplets: &[Triplet],
        after_critic: &mut dyn FnMut(&EmbeddingModel),
    ) -> Result<[f64; 3]> {
        let cfg = self.config.clone();
        let clip = match cfg.clip_scope {
            ClipScope::Embeddings => Some(cfg.clip),
            ClipScope::None => None,
        };
        let items = self.draw(triplets);
        let adv = self.adversary.as_mut().expect("adversarial trainer");
        let l_ga = update_autoencoder(
            &mut adv.gen,
            &mut adv.dec,
            &items,
            &mut adv.gen_opt,
            &mut adv.dec_opt,
            cfg.lr_gen,
        )?;
        let mut l_d = 0.0;
        for _ in 0..cfg.n_dis {
            let items = self.draw(triplets);
            let adv = self.adversary.as_ref().expect("adversarial trainer");
            l_d += update_discriminator(
                &mut self.model,
                &adv.gen,
                &items,
                &mut self.model_opt,
                cfg.lr_dis,
                clip,
            )?;
            if let Some(c) = clip {
                debug_assert!(self.model.parameters().all(|p| p.abs() <= c));
            }
            after_critic(&self.model);
        }
        let items = self.draw(triplets);
        let adv = self.adversary.as_mut().expect("adversarial trainer");
        let l_g = update_generator(
            &self.model,
            &mut adv.gen,
            &items,
            &mut adv.gen_opt,
            cfg.lr_gen,
        )?;
        Ok([l_ga, l_d / cfg.n_dis as f64, l_g])
    }

    fn baseline_batch(&mut self, triplets: &[Triplet]) -> Result<f64> {
        let ne = self.model.num_entities();
        let k = self.config.negatives;
        let batch = triplets
            .iter()
            .map(|t| {
                let negatives = (0..k)
                    .map(|_| uniform_corrupt(t, ne, &mut self.rng).map(|s| s.corrupted))
                    .collect::<Result<Vec<_>>>()?;
                Ok(BaselineItem {
                    positive: *t,
                    negatives,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = &self.config;
        update_baseline(
            &mut self.model,
            &batch,
            &mut self.model_opt,
            cfg.lr_dis,
            cfg.sampler,
            cfg.margin,
            cfg.adv_temperature,
        )
    }

    /// Runs the remaining configured epochs.
    pub fn run(&mut self) -> Result<Vec<EpochReport>> {
        (self.epoch..self.config.epochs)
            .map(|_| self.run_epoch())
            .collect()
    }
}

/// Adversarial training; returns the critic's embeddings.
pub fn train(
    config: &TrainConfig,
    split: &DatasetSplit,
    n_entities: usize,
    n_relations: usize,
) -> Result<(EmbeddingModel, Vec<EpochReport>)> {
    if config.sampler != SamplerKind::Aae {
        return Err(Error::Config(format!(
            "train expects the aae sampler, got {}",
            config.sampler
        )));
    }
    let mut trainer = Trainer::new(config.clone(), n_entities, n_relations, &split.train)?;
    let reports = trainer.run()?;
    Ok((trainer.into_model(), reports))
}

/// Uniform or self-adversarial negative-sampling training.
pub fn train_baseline(
    config: &TrainConfig,
    split: &DatasetSplit,
    n_entities: usize,
    n_relations: usize,
) -> Result<(EmbeddingModel, Vec<EpochReport>)> {
    if config.sampler == SamplerKind::Aae {
        return Err(Error::Config(
            "train_baseline expects the uniform or self_adversarial sampler".into(),
        ));
    }
    let mut trainer = Trainer::new(config.clone(), n_entities, n_relations, &split.train)?;
    let reports = trainer.run()?;
    Ok((trainer.into_model(), reports))
}
