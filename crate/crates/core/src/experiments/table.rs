use crate::error::Result;
use crate::generators::{derive_seed, CultureSpec};
use crate::indices::{evaluate, IndexKind, IndexSettings};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Mean and population standard deviation of indices per culture.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexTable {
    pub labels: Vec<String>,
    pub kinds: Vec<IndexKind>,
    pub mean: Vec<Vec<f64>>,
    pub std: Vec<Vec<f64>>,
    pub samples: usize,
}

impl IndexTable {
    pub fn cell(&self, row: usize, kind: IndexKind) -> Option<(f64, f64)> {
        let col = self.kinds.iter().position(|&k| k == kind)?;
        Some((self.mean[row][col], self.std[row][col]))
    }
}

/// Seed of sample `s` of a spec: combines the experiment seed, the spec's
/// own seed and the sample number.
pub fn sample_seed(seed: u64, spec: &CultureSpec, s: usize) -> u64 {
    derive_seed(derive_seed(seed, spec.seed), s as u64)
}

/// Generates `samples` elections per spec and reports mean and std of the
/// requested indices.
pub fn index_table(specs: &[CultureSpec], kinds: &[IndexKind], samples: usize, seed: u64, base: &IndexSettings) -> Result<IndexTable> {
    let samples = samples.max(1);
    let jobs: Vec<(usize, usize)> = (0..specs.len()).flat_map(|i| (0..samples).map(move |s| (i, s))).collect();
    let values = jobs
        .par_iter()
        .map(|&(i, s)| {
            let sd = sample_seed(seed, &specs[i], s);
            let e = specs[i].generate_with_seed(sd)?;
            let settings = IndexSettings { seed: sd, ..*base };
            evaluate(&e, kinds, &settings)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let mut mean = Vec::with_capacity(specs.len());
    let mut std = Vec::with_capacity(specs.len());
    for rows in values.chunks(samples) {
        let mu: Vec<f64> = (0..kinds.len())
            .map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / samples as f64)
            .collect();
        let sd: Vec<f64> = (0..kinds.len())
            .map(|k| (rows.iter().map(|r| (r[k] - mu[k]).powi(2)).sum::<f64>() / samples as f64).sqrt())
            .collect();
        mean.push(mu);
        std.push(sd);
    }
    Ok(IndexTable {
        labels: specs.iter().map(CultureSpec::display_label).collect(),
        kinds: kinds.to_vec(),
        mean,
        std,
        samples,
    })
}
