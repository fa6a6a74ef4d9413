use std::collections::HashSet;

use super::{Triplet, Vocab};
use crate::error::{Error, Result};
use crate::numkit::RngStream;

/// Parameters of a clustered synthetic graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub n_entities: usize,
    pub n_relations: usize,
    pub n_clusters: usize,
    /// Fraction of compatible (source-cluster, target-cluster) pairs emitted
    /// per relation.
    pub density: f64,
    /// Random triplets added, as a fraction of the structured ones.
    pub noise_rate: f64,
    pub seed: u64,
}

impl SynthParams {
    fn validate(&self) -> Result<()> {
        if self.n_entities == 0 || self.n_relations == 0 || self.n_clusters == 0 {
            return Err(Error::Domain(
                "entity, relation and cluster counts must be positive".into(),
            ));
        }
        if self.n_clusters > self.n_entities {
            return Err(Error::Domain(format!(
                "{} clusters for {} entities",
                self.n_clusters, self.n_entities
            )));
        }
        for (name, v) in [("density", self.density), ("noise_rate", self.noise_rate)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        Ok(())
    }
}

fn padded(prefix: &str, i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len();
    format!("{prefix}{i:0width$}")
}

/// Generates a clustered knowledge graph.
///
/// Entities are spread over `n_clusters` clusters at random; each relation
/// picks a source and a target cluster and links a `density` fraction of the
/// ordered pairs between them (self-loops excluded). `noise_rate` then adds
/// uniformly random triplets.
pub fn synth_kg(params: &SynthParams) -> Result<(Vocab, Vec<Triplet>)> {
    params.validate()?;
    let mut rng = RngStream::new(params.seed);
    let n = params.n_entities;
    let k = params.n_clusters;

    let mut cluster_of: Vec<usize> = (0..n).map(|i| i % k).collect();
    rng.shuffle(&mut cluster_of);
    let mut members = vec![Vec::new(); k];
    for (e, &c) in cluster_of.iter().enumerate() {
        members[c].push(e);
    }

    let mut triplets = Vec::new();
    let mut seen = HashSet::new();
    for r in 0..params.n_relations {
        let src = rng.below(k);
        let dst = rng.below(k);
        let mut pairs: Vec<(usize, usize)> = members[src]
            .iter()
            .flat_map(|&h| members[dst].iter().map(move |&t| (h, t)))
            .filter(|(h, t)| h != t)
            .collect();
        rng.shuffle(&mut pairs);
        let keep = (params.density * pairs.len() as f64).round() as usize;
        for &(h, t) in &pairs[..keep.min(pairs.len())] {
            let trip = Triplet::new(h, r, t);
            seen.insert(trip);
            triplets.push(trip);
        }
    }

    let n_noise = (params.noise_rate * triplets.len() as f64).round() as usize;
    let capacity = n * n.saturating_sub(1) * params.n_relations;
    let mut added = 0;
    let mut attempts = 0;
    while added < n_noise && seen.len() < capacity && attempts < 100 * n_noise.max(1) {
        attempts += 1;
        let h = rng.below(n);
        let t = rng.below(n);
        if h == t {
            continue;
        }
        let trip = Triplet::new(h, rng.below(params.n_relations), t);
        if seen.insert(trip) {
            triplets.push(trip);
            added += 1;
        }
    }

    let vocab = Vocab::from_names(
        (0..n).map(|i| padded("drug_", i, n)).collect(),
        (0..params.n_relations)
            .map(|i| padded("interaction_", i, params.n_relations))
            .collect(),
    )?;
    Ok((vocab, triplets))
}
