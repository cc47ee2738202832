use super::Partition;
use crate::election::Election;
use crate::error::{invalid, Result};
use crate::generators::derive_seed;
use crate::metrics::hamming_matrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MAX_ITERATIONS: usize = 100;

/// k-medoids under Hamming distance with medoids restricted to observed
/// ballots. Returns the best of `restarts` seeded runs.
pub fn kmedoids_hamming(e: &Election, k: usize, seed: u64, restarts: usize) -> Result<Partition> {
    KMedoidsRun::new(e).partition(k, seed, restarts)
}

/// Precomputed Hamming distances reused across several values of k.
pub struct KMedoidsRun {
    n: usize,
    dist: Vec<u32>,
}

impl KMedoidsRun {
    pub fn new(e: &Election) -> Self {
        KMedoidsRun {
            n: e.num_voters(),
            dist: hamming_matrix(e),
        }
    }

    #[inline]
    fn d(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.n + j] as u64
    }

    pub fn partition(&self, k: usize, seed: u64, restarts: usize) -> Result<Partition> {
        if k == 0 {
            return invalid("k-medoids needs k >= 1");
        }
        if k == 1 {
            return Ok(Partition::single(self.n));
        }
        if k >= self.n {
            return Ok(Partition::singletons(self.n));
        }
        let mut best: Option<(u64, Vec<usize>)> = None;
        for r in 0..restarts.max(1) {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, r as u64));
            let medoids = self.seed_medoids(k, &mut rng);
            let (cost, labels) = self.refine(medoids);
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, labels));
            }
        }
        let (_, labels) = best.expect("at least one restart");
        Partition::from_labels(&labels, k)
    }

    /// k-means++ style seeding: each next medoid is drawn with probability
    /// proportional to its squared distance to the nearest chosen medoid.
    fn seed_medoids(&self, k: usize, rng: &mut impl Rng) -> Vec<usize> {
        let n = self.n;
        let mut medoids = vec![rng.gen_range(0..n)];
        let mut nearest: Vec<u64> = (0..n).map(|i| self.d(i, medoids[0])).collect();
        while medoids.len() < k {
            let weights: Vec<u64> = nearest.iter().map(|&d| d * d).collect();
            let total: u64 = weights.iter().sum();
            let next = if total == 0 {
                // fewer distinct ballots than k: pick any unused voter
                let free: Vec<usize> = (0..n).filter(|i| !medoids.contains(i)).collect();
                free[rng.gen_range(0..free.len())]
            } else {
                let mut target = rng.gen_range(0..total);
                let mut pick = 0;
                for (i, &w) in weights.iter().enumerate() {
                    if target < w {
                        pick = i;
                        break;
                    }
                    target -= w;
                }
                pick
            };
            medoids.push(next);
            for (i, near) in nearest.iter_mut().enumerate() {
                *near = (*near).min(self.d(i, next));
            }
        }
        medoids
    }

    /// Alternates nearest-medoid assignment and per-cluster medoid update
    /// until the objective stops decreasing.
    fn refine(&self, mut medoids: Vec<usize>) -> (u64, Vec<usize>) {
        let n = self.n;
        let mut labels = vec![0usize; n];
        let mut prev_cost = u64::MAX;
        for _ in 0..MAX_ITERATIONS {
            let mut cost = 0;
            for (i, label) in labels.iter_mut().enumerate() {
                let (c, d) = medoids
                    .iter()
                    .enumerate()
                    .map(|(c, &m)| (c, self.d(i, m)))
                    .min_by_key(|&(c, d)| (d, c))
                    .expect("k >= 1");
                *label = c;
                cost += d;
            }
            debug_assert!(cost <= prev_cost, "k-medoids objective increased");
            if cost >= prev_cost {
                break;
            }
            prev_cost = cost;

            let mut changed = false;
            for (c, medoid) in medoids.iter_mut().enumerate() {
                let members: Vec<usize> = (0..n).filter(|&i| labels[i] == c).collect();
                if members.is_empty() {
                    continue;
                }
                let within = |x: usize| members.iter().map(|&j| self.d(x, j)).sum::<u64>();
                let current = within(*medoid);
                let (best, best_cost) = members
                    .iter()
                    .map(|&x| (x, within(x)))
                    .min_by_key(|&(x, s)| (s, x))
                    .expect("nonempty cluster");
                if best_cost < current {
                    *medoid = best;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (prev_cost, labels)
    }
}
