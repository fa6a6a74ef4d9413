//! Run configuration: a TOML file whose keys mirror the training options,
//! plus data and output locations. Later layers win: preset, then file, then
//! `--set key=value` flags.

use std::path::{Path, PathBuf};

use ddikge_core::advtrain::{ClipScope, SamplerKind};
use ddikge_core::{ScorerKind, TrainConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub data_dir: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    /// Also write the checkpoint every this many epochs; 0 disables.
    pub checkpoint_every: Option<usize>,
    pub scorer: Option<String>,
    pub sampler: Option<String>,
    pub seed: Option<u64>,
    pub lr_gen: Option<f64>,
    pub lr_dis: Option<f64>,
    pub dim: Option<usize>,
    pub batch_size: Option<usize>,
    pub n_dis: Option<usize>,
    pub epochs: Option<usize>,
    pub clip: Option<f64>,
    pub clip_scope: Option<String>,
    pub tau: Option<f64>,
    pub margin: Option<f64>,
    pub adv_temperature: Option<f64>,
    pub negatives: Option<usize>,
    pub n_filters: Option<usize>,
    pub kernel_h: Option<usize>,
    pub kernel_w: Option<usize>,
    pub decoder_hidden: Option<usize>,
}

/// Fully specified run, with paths made absolute against the config file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRun {
    pub preset: String,
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    pub checkpoint_every: usize,
    pub train: TrainConfig,
}

fn override_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

impl RunConfig {
    pub fn parse(text: &str, overrides: &[String]) -> CliResult<Self> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e| CliError::usage(format!("config: {e}")))?;
        for o in overrides {
            let (key, value) = o
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("override `{o}` is not key=value")))?;
            table.insert(key.trim().to_string(), override_value(value.trim()));
        }
        table
            .try_into()
            .map_err(|e: toml::de::Error| CliError::usage(format!("config: {}", e.message())))
    }

    pub fn load(path: &Path, overrides: &[String]) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, overrides)
    }

    /// Relative paths are taken from `base`.
    pub fn resolve(&self, base: &Path) -> CliResult<ResolvedRun> {
        let preset = self.preset.clone().unwrap_or_else(|| "desk".into());
        let mut t = TrainConfig::preset(&preset)?;
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = self.$field { t.$field = v; } )* };
        }
        take!(
            seed,
            lr_gen,
            lr_dis,
            dim,
            batch_size,
            n_dis,
            epochs,
            clip,
            tau,
            margin,
            adv_temperature,
            negatives,
            n_filters,
            kernel_h,
            kernel_w,
            decoder_hidden
        );
        if let Some(s) = &self.scorer {
            t.scorer = s.parse::<ScorerKind>()?;
        }
        if let Some(s) = &self.sampler {
            t.sampler = s.parse::<SamplerKind>()?;
        }
        if let Some(s) = &self.clip_scope {
            t.clip_scope = s.parse::<ClipScope>()?;
        }
        t.validate()?;
        let path = |p: &Option<PathBuf>, key: &str| -> CliResult<PathBuf> {
            let p = p
                .as_ref()
                .ok_or_else(|| CliError::usage(format!("config: missing key `{key}`")))?;
            Ok(if p.is_absolute() {
                p.clone()
            } else {
                base.join(p)
            })
        };
        Ok(ResolvedRun {
            preset,
            data_dir: path(&self.data_dir, "data_dir")?,
            output_dir: path(&self.output_dir, "output_dir")?,
            checkpoint_every: self.checkpoint_every.unwrap_or(0),
            train: t,
        })
    }
}

impl ResolvedRun {
    /// Every key spelled out, so the file reproduces the run on its own.
    pub fn to_run_config(&self) -> RunConfig {
        let t = &self.train;
        RunConfig {
            preset: Some(self.preset.clone()),
            data_dir: Some(self.data_dir.clone()),
            output_dir: Some(self.output_dir.clone()),
            checkpoint_every: Some(self.checkpoint_every),
            scorer: Some(t.scorer.to_string()),
            sampler: Some(t.sampler.to_string()),
            seed: Some(t.seed),
            lr_gen: Some(t.lr_gen),
            lr_dis: Some(t.lr_dis),
            dim: Some(t.dim),
            batch_size: Some(t.batch_size),
            n_dis: Some(t.n_dis),
            epochs: Some(t.epochs),
            clip: Some(t.clip),
            clip_scope: Some(t.clip_scope.to_string()),
            tau: Some(t.tau),
            margin: Some(t.margin),
            adv_temperature: Some(t.adv_temperature),
            negatives: Some(t.negatives),
            n_filters: Some(t.n_filters),
            kernel_h: Some(t.kernel_h),
            kernel_w: Some(t.kernel_w),
            decoder_hidden: Some(t.decoder_hidden),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_run_config()).expect("run config serialises")
    }

    /// SHA-256 of the training options (paths excluded), hex encoded.
    pub fn config_hash(&self) -> String {
        let mut rc = self.to_run_config();
        rc.data_dir = None;
        rc.output_dir = None;
        let text = toml::to_string(&rc).expect("run config serialises");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
