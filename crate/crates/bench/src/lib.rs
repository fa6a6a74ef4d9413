//! Fixtures shared by the kernel benchmarks.

use ddikge_core::kgstore::{split, synth_kg, SplitRatios, SynthParams};
use ddikge_core::negsamplers::{GeneratorConfig, GeneratorParams};
use ddikge_core::{DatasetSplit, EmbeddingModel, FilterIndex, RngStream, ScorerKind};

pub struct Fixture {
    pub split: DatasetSplit,
    pub filter: FilterIndex,
    pub n_entities: usize,
    pub n_relations: usize,
}

impl Fixture {
    pub fn synthetic(n_entities: usize, n_relations: usize, seed: u64) -> Self {
        let params = SynthParams {
            n_entities,
            n_relations,
            n_clusters: 4,
            density: 0.3,
            noise_rate: 0.0,
            seed,
        };
        let (vocab, triplets) = synth_kg(&params).expect("valid synthetic parameters");
        let split = split(&triplets, SplitRatios::default(), seed).expect("non-empty graph");
        let filter = FilterIndex::build(&split);
        Self {
            split,
            filter,
            n_entities: vocab.num_entities(),
            n_relations: vocab.num_relations(),
        }
    }

    pub fn model(&self, kind: ScorerKind, dim: usize, seed: u64) -> EmbeddingModel {
        let mut rng = RngStream::new(seed);
        EmbeddingModel::init(kind, self.n_entities, self.n_relations, dim, &mut rng)
            .expect("positive dimension")
    }

    pub fn generator(&self, dim: usize, seed: u64) -> GeneratorParams {
        let config = GeneratorConfig {
            dim,
            ..GeneratorConfig::default()
        };
        let mut rng = RngStream::new(seed);
        GeneratorParams::init(self.n_entities, self.n_relations, &config, &mut rng)
            .expect("valid generator config")
    }
}
