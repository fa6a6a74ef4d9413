use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::negsamplers::GeneratorConfig;
use crate::scorers::ScorerKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    /// Gumbel-Softmax autoencoder generator against a Wasserstein critic.
    Aae,
    Uniform,
    SelfAdversarial,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 3] = [Self::Aae, Self::Uniform, Self::SelfAdversarial];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Aae => "aae",
            Self::Uniform => "uniform",
            Self::SelfAdversarial => "self_adversarial",
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown sampler `{s}` (aae, uniform, self_adversarial)"
                ))
            })
    }
}

/// Which critic parameters are clipped after each critic step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClipScope {
    Embeddings,
    None,
}

impl ClipScope {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Embeddings => "embeddings",
            Self::None => "none",
        }
    }
}

impl fmt::Display for ClipScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClipScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "embeddings" => Ok(Self::Embeddings),
            "none" => Ok(Self::None),
            _ => Err(Error::Config(format!(
                "unknown clip scope `{s}` (embeddings, none)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Generator and decoder learning rate.
    pub lr_gen: f64,
    /// Critic (embedding model) learning rate; also used by the baselines.
    pub lr_dis: f64,
    pub dim: usize,
    pub batch_size: usize,
    /// Critic steps per generator step.
    pub n_dis: usize,
    pub epochs: usize,
    pub clip: f64,
    pub clip_scope: ClipScope,
    /// Gumbel-Softmax temperature; logits are divided by it.
    pub tau: f64,
    /// Baseline margin.
    pub margin: f64,
    /// Self-adversarial sharpness.
    pub adv_temperature: f64,
    /// Uniform corruptions per positive in the baselines.
    pub negatives: usize,
    pub n_filters: usize,
    pub kernel_h: usize,
    pub kernel_w: usize,
    /// Decoder hidden width; 0 means `2 · dim`.
    pub decoder_hidden: usize,
    pub scorer: ScorerKind,
    pub sampler: SamplerKind,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr_gen: 0.05,
            lr_dis: 0.1,
            dim: 16,
            batch_size: 64,
            n_dis: 1,
            epochs: 50,
            clip: 1.0,
            clip_scope: ClipScope::Embeddings,
            tau: 0.5,
            margin: 1.0,
            adv_temperature: 1.0,
            negatives: 8,
            n_filters: 8,
            kernel_h: 2,
            kernel_w: 3,
            decoder_hidden: 0,
            scorer: ScorerKind::ComplEx,
            sampler: SamplerKind::Aae,
            seed: 0,
        }
    }
}

pub const PRESET_NAMES: [&str; 7] = [
    "desk",
    "deepddi-complex",
    "deepddi-simple",
    "deepddi-rotate",
    "decagon-complex",
    "decagon-simple",
    "decagon-rotate",
];

impl TrainConfig {
    /// Named configuration. `desk` suits the synthetic graphs; the others are
    /// the published DeepDDI and Decagon settings.
    pub fn preset(name: &str) -> Result<Self> {
        let paper = |scorer, lr_gen, lr_dis, batch_size, n_dis, epochs| TrainConfig {
            lr_gen,
            lr_dis,
            dim: 200,
            batch_size,
            n_dis,
            epochs,
            scorer,
            ..TrainConfig::default()
        };
        use ScorerKind::{ComplEx, RotatE, SimplE};
        Ok(match name {
            "desk" => TrainConfig::default(),
            "deepddi-complex" => paper(ComplEx, 0.001, 0.05, 512, 1, 300),
            "deepddi-simple" => paper(SimplE, 0.001, 0.1, 512, 1, 300),
            "deepddi-rotate" => paper(RotatE, 0.001, 0.5, 512, 2, 500),
            "decagon-complex" => paper(ComplEx, 0.005, 0.5, 1024, 1, 1000),
            "decagon-simple" => paper(SimplE, 0.005, 0.5, 512, 2, 1000),
            "decagon-rotate" => paper(RotatE, 0.005, 0.5, 512, 5, 1000),
            _ => {
                return Err(Error::Config(format!(
                    "unknown preset `{name}` (one of {})",
                    PRESET_NAMES.join(", ")
                )))
            }
        })
    }

    pub fn decoder_width(&self) -> usize {
        if self.decoder_hidden == 0 {
            2 * self.dim
        } else {
            self.decoder_hidden
        }
    }

    pub fn generator_config(&self) -> GeneratorConfig {
        GeneratorConfig {
            dim: self.dim,
            n_filters: self.n_filters,
            kernel_h: self.kernel_h,
            kernel_w: self.kernel_w,
            tau: self.tau,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lr_gen", self.lr_gen),
            ("lr_dis", self.lr_dis),
            ("clip", self.clip),
            ("tau", self.tau),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("margin", self.margin),
            ("adv_temperature", self.adv_temperature),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        let at_least_one = [
            ("dim", self.dim),
            ("batch_size", self.batch_size),
            ("n_dis", self.n_dis),
            ("negatives", self.negatives),
            ("n_filters", self.n_filters),
            ("kernel_h", self.kernel_h),
            ("kernel_w", self.kernel_w),
        ];
        for (name, v) in at_least_one {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if self.kernel_h > 2 {
            return Err(Error::Config(format!(
                "kernel_h = {} exceeds the 2-row input",
                self.kernel_h
            )));
        }
        if self.kernel_w > self.dim {
            return Err(Error::Config(format!(
                "kernel_w = {} exceeds dim = {}",
                self.kernel_w, self.dim
            )));
        }
        Ok(())
    }
}
