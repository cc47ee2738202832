//! Experiment protocols: resampling matrices, index tables, complementarity
//! and correlations, and maps of elections.

mod corpus;
mod features;
mod mds;
mod resampling;
mod stats;
mod table;

pub use corpus::{compass_specs, palette, synthetic_map_specs, MapElection, COMPASS_SIZE};
pub use features::{
    distance_matrix, feature_distance, feature_vector, feature_vector_with, pairs_among_most_distant, FeatureTriple,
    FeatureVector, FEATURE_MAX_CANDIDATES, FEATURE_MAX_VOTERS,
};
pub use mds::{distortion, mds_embed, Embedding, SMACOF_ITERATIONS, STRESS_TOLERANCE};
pub use resampling::{default_phis, default_ps, resampling_experiment, resampling_grid, ResamplingMatrix};
pub use stats::{complementarity, correlations, kendall_tau_b, kendall_tau_b_naive, pearson, population_std};
pub use table::{index_table, sample_seed, IndexTable};

use crate::election::Election;
use crate::error::Result;
use crate::generators::derive_seed;
use crate::indices::IndexSettings;
use rayon::prelude::*;

/// Features, distances and embedding of a map of elections.
#[derive(Debug, Clone)]
pub struct MapResult {
    pub features: Vec<FeatureVector>,
    pub distances: Vec<Vec<f64>>,
    pub embedding: Embedding,
}

/// Computes feature vectors (election i uses a seed derived from `seed`
/// and i), their distance matrix and its MDS embedding.
pub fn run_map(elections: &[Election], triple: &FeatureTriple, seed: u64) -> Result<MapResult> {
    let features = elections
        .par_iter()
        .enumerate()
        .map(|(i, e)| feature_vector_with(e, triple, &IndexSettings::with_seed(derive_seed(seed, i as u64))))
        .collect::<Result<Vec<_>>>()?;
    let distances = distance_matrix(&features);
    let embedding = mds_embed(&distances, seed)?;
    Ok(MapResult {
        features,
        distances,
        embedding,
    })
}

/// Generates every election of a map manifest.
pub fn generate_map_elections(entries: &[MapElection]) -> Result<Vec<Election>> {
    entries.par_iter().map(|m| m.spec.generate()).collect()
}
