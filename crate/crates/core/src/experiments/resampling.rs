use crate::error::{invalid, Result};
use crate::generators::{derive_seed, gen_resampling};
use crate::indices::{IndexKind, IndexSettings};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Mean index values over a (p, φ) grid of resampling elections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResamplingMatrix {
    pub index: IndexKind,
    pub m: usize,
    pub n: usize,
    pub samples_per_cell: usize,
    /// row parameters
    pub ps: Vec<f64>,
    /// column parameters
    pub phis: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl ResamplingMatrix {
    /// max − min over rows, per column.
    pub fn column_spread(&self) -> Vec<f64> {
        (0..self.phis.len())
            .map(|j| {
                let col = self.values.iter().map(|r| r[j]);
                let hi = col.clone().fold(f64::MIN, f64::max);
                let lo = col.fold(f64::MAX, f64::min);
                hi - lo
            })
            .collect()
    }
}

/// p ∈ {0.1, ..., 0.9}.
pub fn default_ps() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

/// φ ∈ {0, 0.1, ..., 1}.
pub fn default_phis() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

pub fn resampling_experiment(index: IndexKind, m: usize, n: usize, samples: usize, seed: u64) -> Result<ResamplingMatrix> {
    resampling_grid(index, m, n, samples, seed, &default_ps(), &default_phis())
}

/// Cell (r, c) averages `samples` elections whose seeds derive from
/// (seed, r, c, sample), so the result does not depend on scheduling.
pub fn resampling_grid(
    index: IndexKind,
    m: usize,
    n: usize,
    samples: usize,
    seed: u64,
    ps: &[f64],
    phis: &[f64],
) -> Result<ResamplingMatrix> {
    if samples == 0 {
        return invalid("samples must be at least 1");
    }
    let cells: Vec<(usize, usize)> = (0..ps.len()).flat_map(|r| (0..phis.len()).map(move |c| (r, c))).collect();
    let means = cells
        .par_iter()
        .map(|&(r, c)| {
            let cell_seed = derive_seed(derive_seed(seed, r as u64), c as u64);
            let mut total = 0.0;
            for s in 0..samples {
                let sample_seed = derive_seed(cell_seed, s as u64);
                let e = gen_resampling(m, n, ps[r], phis[c], sample_seed)?;
                total += index.value(&e, &IndexSettings::with_seed(sample_seed))?;
            }
            Ok(total / samples as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let values = means.chunks(phis.len()).map(<[f64]>::to_vec).collect();
    Ok(ResamplingMatrix {
        index,
        m,
        n,
        samples_per_cell: samples,
        ps: ps.to_vec(),
        phis: phis.to_vec(),
        values,
    })
}
