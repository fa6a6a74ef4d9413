//! Knowledge-graph embedding toolkit for drug-drug interaction graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`numkit`]: dense matrices, convolution and softmax kernels with their
//!   gradients, Adagrad, weight clipping and a portable seeded RNG.
//! - [`kgstore`]: TSV ingestion, vocabularies, seeded splits, the filtered
//!   evaluation index and a synthetic clustered graph generator.
//! - [`scorers`]: TransE, DistMult, ComplEx, SimplE and RotatE under a single
//!   "higher is more plausible" convention, with analytic gradients.
//! - [`negsamplers`]: uniform corruption, self-adversarial weighting and the
//!   Gumbel-Softmax autoencoder generator.
//! - [`advtrain`]: the Wasserstein adversarial training loop and the
//!   sigmoid-margin baselines.
//! - [`evalkit`]: filtered MR/MRR/HITS@N and multi-label classification
//!   metrics (ROC-AUC, PR-AUC, P@K), each with a brute-force oracle.

pub mod advtrain;
pub mod error;
pub mod evalkit;
pub mod kgstore;
pub mod negsamplers;
pub mod numkit;
pub mod scorers;

pub use advtrain::{
    train, train_baseline, ClipScope, EpochReport, SamplerKind, TrainConfig, Trainer,
};
pub use error::{Error, Result};
pub use evalkit::{
    ddi_classification, filtered_rank, link_prediction_metrics, rank_oracle, MetricsReport,
    RankResult,
};
pub use kgstore::{DatasetSplit, FilterIndex, Side, Triplet, Vocab};
pub use negsamplers::{DecoderParams, GeneratorParams, NegativeSample};
pub use numkit::{AdagradState, DenseMatrix, RngStream};
pub use scorers::{EmbeddingModel, Norm, ScorerKind};
