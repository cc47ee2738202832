//! Lloyd's k-means with k-means++ seeding, used on spectral embeddings.

use crate::generators::derive_seed;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centers: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, center) in centers.iter().enumerate() {
        let d = sq_dist(point, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn seed_centers(points: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![rng.gen_range(0..n)];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &points[chosen[0]])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total <= 0.0 {
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.gen_range(0..free.len())]
        } else {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        };
        chosen.push(next);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(sq_dist(&points[i], &points[next]));
        }
    }
    chosen.into_iter().map(|i| points[i].clone()).collect()
}

/// Best-inertia labelling over `inits` seeded runs of at most `max_iter`
/// Lloyd iterations each.
pub(crate) fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, inits: usize, max_iter: usize) -> Vec<usize> {
    let n = points.len();
    let dim = points.first().map_or(0, Vec::len);
    let mut best: Option<(f64, Vec<usize>)> = None;
    for run in 0..inits.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, run as u64));
        let mut centers = seed_centers(points, k, &mut rng);
        let mut labels = vec![usize::MAX; n];
        let mut inertia = 0.0;
        for _ in 0..max_iter {
            let mut moved = false;
            inertia = 0.0;
            for (i, p) in points.iter().enumerate() {
                let (c, d) = nearest(p, &centers);
                if labels[i] != c {
                    labels[i] = c;
                    moved = true;
                }
                inertia += d;
            }
            if !moved {
                break;
            }
            let mut sums = vec![vec![0.0; dim]; k];
            let mut counts = vec![0usize; k];
            for (p, &c) in points.iter().zip(&labels) {
                counts[c] += 1;
                for (s, x) in sums[c].iter_mut().zip(p) {
                    *s += x;
                }
            }
            for c in 0..k {
                if counts[c] > 0 {
                    centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
                }
            }
        }
        if best.as_ref().is_none_or(|(b, _)| inertia < *b) {
            best = Some((inertia, labels));
        }
    }
    best.map(|(_, l)| l).unwrap_or_default()
}
