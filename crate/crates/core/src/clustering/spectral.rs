//! Spectral clustering of voters on the phi-coefficient affinity.

use super::kmeans::kmeans;
use super::Partition;
use crate::election::Election;
use crate::error::{invalid, Result};
use crate::metrics::PairKernel;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

const KMEANS_INITS: usize = 10;
const KMEANS_ITERATIONS: usize = 50;

/// How a phi coefficient in [−1, 1] becomes an affinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Affinity {
    /// (1 + pcc) / 2, in [0, 1]: 0 for opposite votes, 1 for equal ones.
    Rescaled,
    /// 1 + pcc / 2, in [0.5, 1.5].
    Literal,
}

impl Affinity {
    #[inline]
    pub fn apply(self, pcc: f64) -> f64 {
        match self {
            Affinity::Rescaled => (1.0 + pcc) / 2.0,
            Affinity::Literal => 1.0 + pcc / 2.0,
        }
    }
}

/// Leading eigenvectors of the normalized affinity D^{-1/2} W D^{-1/2},
/// i.e. the eigenvectors of smallest eigenvalue of the symmetric normalized
/// Laplacian, computed once and reused for every k up to `max_k`.
pub struct SpectralEmbedding {
    n: usize,
    /// row-major n x max_k
    vectors: Vec<f64>,
    max_k: usize,
    eigenvalues: Vec<f64>,
}

impl SpectralEmbedding {
    pub fn new(e: &Election, max_k: usize, affinity: Affinity) -> Self {
        let n = e.num_voters();
        let max_k = max_k.min(n);
        let kernel = PairKernel::new(e);
        let mut w = kernel.matrix(|c| affinity.apply(c.pcc::<f64>()));
        for i in 0..n {
            w[i * n + i] = 0.0;
        }
        let inv_sqrt_deg: Vec<f64> = (0..n)
            .map(|i| {
                let d: f64 = w[i * n..(i + 1) * n].iter().sum();
                if d > 0.0 {
                    1.0 / d.sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        let m = DMatrix::from_fn(n, n, |i, j| inv_sqrt_deg[i] * w[i * n + j] * inv_sqrt_deg[j]);
        let eig = m.symmetric_eigen();
        // Laplacian eigenvalue 1 − λ ascending, index as tie-break
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .total_cmp(&eig.eigenvalues[a])
                .then(a.cmp(&b))
        });
        order.truncate(max_k);
        let mut vectors = vec![0.0; n * max_k];
        for (col, &idx) in order.iter().enumerate() {
            for i in 0..n {
                vectors[i * max_k + col] = eig.eigenvectors[(i, idx)];
            }
        }
        let eigenvalues = order.iter().map(|&i| 1.0 - eig.eigenvalues[i]).collect();
        SpectralEmbedding {
            n,
            vectors,
            max_k,
            eigenvalues,
        }
    }

    /// Laplacian eigenvalues of the kept eigenvectors, ascending.
    pub fn laplacian_eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Row-normalized embedding on the first k eigenvectors, clustered with
    /// seeded k-means.
    pub fn partition(&self, k: usize, seed: u64) -> Result<Partition> {
        if k == 0 {
            return invalid("spectral clustering needs k >= 1");
        }
        if k == 1 {
            return Ok(Partition::single(self.n));
        }
        if k >= self.n {
            return Ok(Partition::singletons(self.n));
        }
        if k > self.max_k {
            return invalid(format!("embedding holds {} eigenvectors, asked for {k}", self.max_k));
        }
        let rows: Vec<Vec<f64>> = (0..self.n)
            .map(|i| {
                let row = &self.vectors[i * self.max_k..i * self.max_k + k];
                let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.0 {
                    row.iter().map(|x| x / norm).collect()
                } else {
                    row.to_vec()
                }
            })
            .collect();
        let labels = kmeans(&rows, k, seed, KMEANS_INITS, KMEANS_ITERATIONS);
        Partition::from_labels(&labels, k)
    }
}

pub fn spectral_pcc(e: &Election, k: usize, seed: u64, affinity: Affinity) -> Result<Partition> {
    if k == 0 {
        return invalid("spectral clustering needs k >= 1");
    }
    if k == 1 {
        return Ok(Partition::single(e.num_voters()));
    }
    SpectralEmbedding::new(e, k, affinity).partition(k, seed)
}
