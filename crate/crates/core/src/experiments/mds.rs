//! Metric multidimensional scaling by SMACOF, started from classical MDS.

use crate::error::{invalid, Result};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub const SMACOF_ITERATIONS: usize = 300;
pub const STRESS_TOLERANCE: f64 = 1e-9;
const ZERO_DISTANCE: f64 = 1e-9;

/// Planar coordinates for every input point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub coords: Vec<[f64; 2]>,
    /// Mean over pairs of max(embedded / true, true / embedded).
    pub distortion: f64,
    /// Raw stress Σ_{i<j} (δ_ij − d_ij)² at the returned coordinates.
    pub stress: f64,
    /// Stress after the classical start and after every SMACOF step.
    pub stress_history: Vec<f64>,
}

fn planar(c: &[[f64; 2]], i: usize, j: usize) -> f64 {
    let dx = c[i][0] - c[j][0];
    let dy = c[i][1] - c[j][1];
    (dx * dx + dy * dy).sqrt()
}

fn stress(d: &[Vec<f64>], c: &[[f64; 2]]) -> f64 {
    let n = d.len();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let r = d[i][j] - planar(c, i, j);
            s += r * r;
        }
    }
    s
}

/// Mean multiplicative distortion over pairs whose true distance exceeds
/// 1e-9. Returns 1 when no such pair exists.
pub fn distortion(d: &[Vec<f64>], c: &[[f64; 2]]) -> f64 {
    let n = d.len();
    let (mut total, mut count) = (0.0, 0usize);
    for i in 0..n {
        for j in i + 1..n {
            let t = d[i][j];
            if t > ZERO_DISTANCE {
                let e = planar(c, i, j);
                total += if e > 0.0 { (e / t).max(t / e) } else { f64::INFINITY };
                count += 1;
            }
        }
    }
    if count == 0 {
        1.0
    } else {
        total / count as f64
    }
}

fn classical(d: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let n = d.len();
    let sq = DMatrix::from_fn(n, n, |i, j| d[i][j] * d[i][j]);
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - row_means[j] + grand));
    let eig = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let mut out = vec![[0.0; 2]; n];
    for (axis, &k) in order.iter().take(2).enumerate() {
        let scale = eig.eigenvalues[k].max(0.0).sqrt();
        for (i, p) in out.iter_mut().enumerate() {
            p[axis] = eig.eigenvectors[(i, k)] * scale;
        }
    }
    out
}

/// Embeds a symmetric distance matrix in the plane. The seed only matters
/// when the classical start collapses points onto each other, in which case
/// they are jittered apart.
pub fn mds_embed(distances: &[Vec<f64>], seed: u64) -> Result<Embedding> {
    let n = distances.len();
    if distances.iter().any(|r| r.len() != n) {
        return invalid("distance matrix must be square");
    }
    for i in 0..n {
        if distances[i][i] != 0.0 {
            return invalid(format!("distance matrix has nonzero diagonal at {i}"));
        }
        for j in 0..n {
            let v = distances[i][j];
            if !v.is_finite() || v < 0.0 {
                return invalid(format!("distance ({i}, {j}) = {v} is not a nonnegative number"));
            }
            if (v - distances[j][i]).abs() > 1e-12 * v.max(1.0) {
                return invalid(format!("distance matrix is not symmetric at ({i}, {j})"));
            }
        }
    }
    if n == 0 {
        return Ok(Embedding {
            coords: Vec::new(),
            distortion: 1.0,
            stress: 0.0,
            stress_history: vec![0.0],
        });
    }
    let mut x = classical(distances);
    let scale = distances.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        for j in 0..i {
            if distances[i][j] > ZERO_DISTANCE && planar(&x, i, j) == 0.0 {
                x[i][0] += 1e-6 * scale * (rng.gen::<f64>() - 0.5);
                x[i][1] += 1e-6 * scale * (rng.gen::<f64>() - 0.5);
            }
        }
    }

    let mut history = vec![stress(distances, &x)];
    for _ in 0..SMACOF_ITERATIONS {
        // Guttman transform with unit weights: X ← B(X)·X / n
        let mut next = vec![[0.0; 2]; n];
        for i in 0..n {
            let mut bii = 0.0;
            for j in 0..n {
                if i == j {
                    continue;
                }
                let dij = planar(&x, i, j);
                if dij > 0.0 {
                    let b = -distances[i][j] / dij;
                    bii -= b;
                    next[i][0] += b * x[j][0];
                    next[i][1] += b * x[j][1];
                }
            }
            next[i][0] += bii * x[i][0];
            next[i][1] += bii * x[i][1];
            next[i][0] /= n as f64;
            next[i][1] /= n as f64;
        }
        x = next;
        let s = stress(distances, &x);
        let prev = *history.last().expect("nonempty");
        history.push(s);
        if prev - s <= STRESS_TOLERANCE * prev.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(Embedding {
        distortion: distortion(distances, &x),
        stress: *history.last().expect("nonempty"),
        coords: x,
        stress_history: history,
    })
}
