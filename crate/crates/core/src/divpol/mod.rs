//! Diversity and polarization indices: clustering-based, pairwise and
//! outer diversity.

pub mod transport;

use crate::agreement::Agreement;
use crate::clustering::{weighted_cluster_agreement, Clusterer, Partition};
use crate::election::{Ballot, Election};
use crate::error::{invalid, Result};
use crate::generators::{derive_seed, gen_p_ic};
use crate::metrics::{hamming_matrix, PairCounts};
use num_traits::Float;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use transport::min_cost_transport;

/// Number of cluster counts averaged by the diversity indices.
pub const MAX_CLUSTERS: usize = 5;

/// The clustering heuristic paired with an agreement index: k-medoids
/// under Hamming distance for central agreement, spectral clustering on
/// the phi coefficient otherwise.
pub fn default_clusterer(agr: Agreement) -> Clusterer {
    match agr {
        Agreement::Cntr => Clusterer::KMEDOIDS,
        _ => Clusterer::SPECTRAL,
    }
}

/// 1 − (1/5) Σ_{k=1..5} best weighted agreement over k-partitions.
pub fn a_div(e: &Election, agr: Agreement, clusterer: Clusterer, seed: u64) -> Result<f64> {
    let parts = clusterer.partitions(e, MAX_CLUSTERS, seed)?;
    a_div_from_partitions(e, agr, &parts)
}

/// Diversity from precomputed partitions for k = 1, 2, ...; the first one
/// is replaced by the trivial partition.
pub fn a_div_from_partitions(e: &Election, agr: Agreement, parts: &[Partition]) -> Result<f64> {
    if parts.is_empty() {
        return invalid("diversity needs at least one partition");
    }
    let mut total = agr.value(e);
    for p in &parts[1..] {
        total += weighted_cluster_agreement(e, p, agr)?;
    }
    Ok((1.0 - total / parts.len() as f64).clamp(0.0, 1.0))
}

/// Agreement gain of the best found 2-partition over the whole election.
pub fn a_pol(e: &Election, agr: Agreement, clusterer: Clusterer, seed: u64) -> Result<f64> {
    let p = clusterer.partition(e, 2, seed)?;
    a_pol_from_partition(e, agr, &p)
}

pub fn a_pol_from_partition(e: &Election, agr: Agreement, two: &Partition) -> Result<f64> {
    let whole = agr.value(e);
    let split = weighted_cluster_agreement(e, two, agr)?.max(whole);
    Ok((split - whole).clamp(0.0, 1.0))
}

/// 2/m times the population standard deviation of Hamming distances over
/// all ordered pairs of voters, self-pairs included.
pub fn pair_pol<T: Float>(e: &Election) -> T {
    let n = e.num_voters();
    let ham = hamming_matrix(e);
    let (s1, s2) = ham.iter().fold((0u128, 0u128), |(a, b), &h| {
        (a + h as u128, b + (h as u128) * (h as u128))
    });
    let pairs = (n * n) as u128;
    // n^4 · variance, exact in integers
    let num = pairs * s2 - s1 * s1;
    let to = |x: u128| T::from(x).expect("count fits a float");
    let two = T::one() + T::one();
    two * to(num).sqrt() / (to(pairs) * to(e.num_candidates() as u128))
}

/// Normalized Hamming distance between one vote with a q fraction of
/// approvals and the p-weighted universe of all votes.
pub fn ham_single_to_unc(p: f64, q: f64) -> f64 {
    p * (1.0 - q) + q * (1.0 - p)
}

/// Parameters of the sampled outer diversity estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OuterDiversityConfig {
    /// p-IC samples drawn per vote of the election
    pub sample_multiplier: usize,
    pub seed: u64,
}

impl Default for OuterDiversityConfig {
    fn default() -> Self {
        OuterDiversityConfig {
            sample_multiplier: 5,
            seed: 0,
        }
    }
}

impl OuterDiversityConfig {
    pub fn new(sample_multiplier: usize, seed: u64) -> Result<Self> {
        if sample_multiplier == 0 {
            return invalid("sample_multiplier must be at least 1");
        }
        Ok(OuterDiversityConfig {
            sample_multiplier,
            seed,
        })
    }
}

fn distinct(ballots: &[Ballot]) -> Vec<(Ballot, usize)> {
    let mut map: BTreeMap<Vec<u64>, (Ballot, usize)> = BTreeMap::new();
    for b in ballots {
        map.entry(b.words().to_vec()).or_insert_with(|| (b.clone(), 0)).1 += 1;
    }
    map.into_values().collect()
}

fn hamming_costs(rows: &[Ballot], cols: &[Ballot]) -> Vec<f64> {
    rows.iter()
        .flat_map(|u| {
            cols.iter()
                .map(move |v| PairCounts::of(u, v).expect("same length").hamming() as f64)
        })
        .collect()
}

fn normalize(est: f64, p: f64) -> f64 {
    (1.0 - est / (2.0 * p * (1.0 - p))).clamp(0.0, 1.0)
}

/// Outer diversity with ham(V, p-U_C) estimated by optimally matching
/// `sample_multiplier` copies of every vote to as many p-IC samples.
pub fn out_div(e: &Election, cfg: &OuterDiversityConfig) -> Result<f64> {
    if cfg.sample_multiplier == 0 {
        return invalid("sample_multiplier must be at least 1");
    }
    let p = e.stats().satr;
    if p <= 0.0 || p >= 1.0 {
        return Ok(0.0);
    }
    let votes = distinct(e.ballots());
    if votes.len() == 1 {
        let q = votes[0].0.count_ones() as f64 / e.num_candidates() as f64;
        return Ok(normalize(ham_single_to_unc(p, q), p));
    }
    let (m, n) = (e.num_candidates(), e.num_voters());
    let samples = cfg.sample_multiplier * n;
    let drawn = gen_p_ic(m, samples, p, derive_seed(cfg.seed, 0x0d17))?;

    let targets = distinct(drawn.ballots());
    let supply: Vec<f64> = votes
        .iter()
        .map(|(_, c)| (c * cfg.sample_multiplier) as f64)
        .collect();
    let demand: Vec<f64> = targets.iter().map(|(_, c)| *c as f64).collect();
    let rows: Vec<Ballot> = votes.into_iter().map(|(b, _)| b).collect();
    let cols: Vec<Ballot> = targets.into_iter().map(|(b, _)| b).collect();
    let plan = min_cost_transport(&supply, &demand, &hamming_costs(&rows, &cols))?;
    Ok(normalize(plan.cost / (samples * m) as f64, p))
}

/// Largest candidate count accepted by [`out_div_exact`].
pub const EXACT_MAX_CANDIDATES: usize = 10;

/// Outer diversity against the full p-weighted universe of 2^m votes.
pub fn out_div_exact(e: &Election) -> Result<f64> {
    let m = e.num_candidates();
    if m > EXACT_MAX_CANDIDATES {
        return invalid(format!(
            "exact outer diversity enumerates 2^m votes; m = {m} exceeds {EXACT_MAX_CANDIDATES}"
        ));
    }
    let p = e.stats().satr;
    if p <= 0.0 || p >= 1.0 {
        return Ok(0.0);
    }
    let n = e.num_voters() as f64;
    let universe: Vec<Ballot> = (0u64..1 << m)
        .map(|mask| Ballot::from_approved(m, (0..m).filter(|j| mask >> j & 1 == 1)))
        .collect::<Result<_>>()?;
    let weights: Vec<f64> = universe
        .iter()
        .map(|u| {
            let k = u.count_ones() as i32;
            p.powi(k) * (1.0 - p).powi(m as i32 - k)
        })
        .collect();
    let votes = distinct(e.ballots());
    let supply: Vec<f64> = votes.iter().map(|(_, c)| *c as f64 / n).collect();
    let rows: Vec<Ballot> = votes.into_iter().map(|(b, _)| b).collect();
    let plan = min_cost_transport(&supply, &weights, &hamming_costs(&rows, &universe))?;
    Ok(normalize(plan.cost / m as f64, p))
}
