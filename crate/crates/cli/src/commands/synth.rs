use ddikge_core::kgstore::{synth_kg, SynthParams};
use ddikge_core::Error;

use crate::cli::SynthArgs;
use crate::data::{tsv_bytes, write_atomic};
use crate::error::{CliError, CliResult};

/// Returns the number of triplets written.
pub fn cmd_synth(args: &SynthArgs) -> CliResult<usize> {
    let params = SynthParams {
        n_entities: args.entities,
        n_relations: args.relations,
        n_clusters: args.clusters,
        density: args.density,
        noise_rate: args.noise,
        seed: args.seed,
    };
    let (vocab, triplets) = synth_kg(&params).map_err(|e| match e {
        Error::Domain(m) => CliError::usage(format!("synth: {m}")),
        other => other.into(),
    })?;
    if let Some(dir) = args.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        crate::data::create_dir(dir)?;
    }
    write_atomic(&args.out, &tsv_bytes(&vocab, &triplets)?)?;
    Ok(triplets.len())
}
