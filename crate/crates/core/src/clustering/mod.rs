//! Voter-partition heuristics behind the clustering-based diversity and
//! polarization indices.

mod kmeans;
mod kmedoids;
mod spectral;

pub use kmedoids::{kmedoids_hamming, KMedoidsRun};
pub use spectral::{spectral_pcc, Affinity, SpectralEmbedding};

use crate::agreement::Agreement;
use crate::election::Election;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};

/// An assignment of n voters to clusters `0..k`.
///
/// Cluster ids are numbered by first appearance, so the ids in use always
/// form a prefix of `0..k`; trailing clusters may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    assignments: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Relabels `labels` by first appearance.
    pub fn from_labels(labels: &[usize], k: usize) -> Result<Self> {
        if k == 0 {
            return invalid("a partition needs k >= 1");
        }
        let mut map: Vec<Option<usize>> = Vec::new();
        let mut next = 0;
        let mut assignments = Vec::with_capacity(labels.len());
        for &l in labels {
            if l >= map.len() {
                map.resize(l + 1, None);
            }
            let id = *map[l].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
            assignments.push(id);
        }
        if next > k {
            return invalid(format!("{next} clusters used but k = {k}"));
        }
        Ok(Partition { assignments, k })
    }

    pub fn single(n: usize) -> Self {
        Partition {
            assignments: vec![0; n],
            k: 1,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignments: (0..n).collect(),
            k: n.max(1),
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assignments
    }

    pub fn num_voters(&self) -> usize {
        self.assignments.len()
    }

    /// Voter indices per cluster, `k` lists (possibly empty).
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &c) in self.assignments.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// True if both partitions group voters identically, ignoring labels.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        let mut a = self.clusters();
        let mut b = other.clusters();
        a.retain(|c| !c.is_empty());
        b.retain(|c| !c.is_empty());
        a.sort();
        b.sort();
        a == b
    }
}

/// Σ_i (|V_i| / n) · agr(V_i). Empty clusters carry no weight.
pub fn weighted_cluster_agreement(e: &Election, p: &Partition, agr: Agreement) -> Result<f64> {
    let n = e.num_voters();
    if p.num_voters() != n {
        return invalid(format!(
            "partition covers {} voters, election has {n}",
            p.num_voters()
        ));
    }
    let mut total = 0.0;
    for cluster in p.clusters() {
        if cluster.is_empty() {
            continue;
        }
        let sub = e.restrict_voters(&cluster)?;
        total += cluster.len() as f64 / n as f64 * agr.value(&sub);
    }
    Ok(total)
}

/// Which partition heuristic to use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Clusterer {
    KMedoids { restarts: usize },
    Spectral { affinity: Affinity },
}

impl Clusterer {
    pub const KMEDOIDS: Clusterer = Clusterer::KMedoids { restarts: 10 };
    pub const SPECTRAL: Clusterer = Clusterer::Spectral {
        affinity: Affinity::Rescaled,
    };

    pub fn partition(&self, e: &Election, k: usize, seed: u64) -> Result<Partition> {
        match *self {
            Clusterer::KMedoids { restarts } => kmedoids_hamming(e, k, seed, restarts),
            Clusterer::Spectral { affinity } => spectral_pcc(e, k, seed, affinity),
        }
    }

    /// Partitions for every k in `1..=max_k`, sharing setup work (distance
    /// matrix, eigendecomposition) across the values of k.
    pub fn partitions(&self, e: &Election, max_k: usize, seed: u64) -> Result<Vec<Partition>> {
        match *self {
            Clusterer::KMedoids { restarts } => {
                let run = KMedoidsRun::new(e);
                (1..=max_k).map(|k| run.partition(k, seed, restarts)).collect()
            }
            Clusterer::Spectral { affinity } => {
                let emb = SpectralEmbedding::new(e, max_k, affinity);
                (1..=max_k).map(|k| emb.partition(k, seed)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    #[test]
    fn labels_are_canonicalized() {
        let p = Partition::from_labels(&[4, 4, 1, 4, 0], 3).unwrap();
        assert_eq!(p.assignments(), &[0, 0, 1, 0, 2]);
        assert!(Partition::from_labels(&[0, 1, 2], 2).is_err());
        assert!(p.same_grouping(&Partition::from_labels(&[1, 1, 0, 1, 2], 3).unwrap()));
    }

    #[test]
    fn weighted_agreement_examples() {
        let e = gen_p_ic(20, 30, 0.4, 3).unwrap();
        let whole = weighted_cluster_agreement(&e, &Partition::single(30), Agreement::Pcc).unwrap();
        assert_eq!(whole, Agreement::Pcc.value(&e));

        let two = gen_k_party(60, 60, 2).unwrap();
        let parties = Partition::from_labels(&[vec![0; 30], vec![1; 30]].concat(), 2).unwrap();
        let v = weighted_cluster_agreement(&two, &parties, Agreement::Pcc).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let id = gen_p_id(20, 12, 0.3).unwrap();
        let labels: Vec<usize> = (0..12).map(|i| i % 5).collect();
        let p = Partition::from_labels(&labels, 5).unwrap();
        for a in Agreement::ALL {
            assert!((weighted_cluster_agreement(&id, &p, a).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(weighted_cluster_agreement(&id, &Partition::single(3), Agreement::Pcc).is_err());
    }

    #[test]
    fn singleton_clusters_score_one() {
        let e = gen_diagonal(8).unwrap();
        for a in Agreement::ALL {
            let v = weighted_cluster_agreement(&e, &Partition::singletons(8), a).unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{a}");
        }
    }

    #[test]
    fn both_clusterers_recover_parties() {
        for k in [2usize, 3, 4] {
            let e = gen_k_party(60, 60, k).unwrap();
            let truth: Vec<usize> = (0..60).map(|i| i / (60 / k)).collect();
            let truth = Partition::from_labels(&truth, k).unwrap();
            for c in [Clusterer::KMEDOIDS, Clusterer::SPECTRAL] {
                let p = c.partition(&e, k, 1).unwrap();
                assert!(p.same_grouping(&truth), "{c:?} k={k}");
                for a in [Agreement::Pcc, Agreement::Cntr] {
                    let v = weighted_cluster_agreement(&e, &p, a).unwrap();
                    assert!((v - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn k_one_and_oversized_k() {
        let e = gen_p_ic(10, 6, 0.5, 2).unwrap();
        for c in [Clusterer::KMEDOIDS, Clusterer::SPECTRAL] {
            assert_eq!(c.partition(&e, 1, 0).unwrap(), Partition::single(6));
            let p = c.partition(&e, 9, 0).unwrap();
            assert!(p.same_grouping(&Partition::singletons(6)));
        }
    }

    #[test]
    fn clusterers_are_deterministic_and_complete() {
        let e = gen_p_ic(30, 40, 0.5, 5).unwrap();
        for c in [Clusterer::KMEDOIDS, Clusterer::SPECTRAL] {
            for k in 1..=5 {
                let a = c.partition(&e, k, 3).unwrap();
                assert_eq!(a, c.partition(&e, k, 3).unwrap());
                assert_eq!(a.num_voters(), 40);
                assert!(a.assignments().iter().all(|&x| x < a.k()));
            }
            let batch = c.partitions(&e, 5, 3).unwrap();
            for (k, p) in batch.iter().enumerate() {
                assert_eq!(*p, c.partition(&e, k + 1, 3).unwrap());
            }
        }
    }

    #[test]
    fn spectral_is_permutation_equivariant() {
        let e = gen_xy_two_party(40, 30, 0.4, 0.6).unwrap();
        let e = gen_noisy(&e, 0.1, 3).unwrap();
        let perm: Vec<usize> = (0..30).rev().collect();
        let permuted = e.restrict_voters(&perm).unwrap();
        let a = spectral_pcc(&e, 2, 4, Affinity::Rescaled).unwrap();
        let b = spectral_pcc(&permuted, 2, 4, Affinity::Rescaled).unwrap();
        let back: Vec<usize> = perm.iter().map(|&i| a.assignments()[i]).collect();
        assert!(Partition::from_labels(&back, 2).unwrap().same_grouping(&b));
    }
}
