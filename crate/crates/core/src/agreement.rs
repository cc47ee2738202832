//! The six agreement indices.
//!
//! Count-based indices are generic over [`Scalar`] so they can be evaluated
//! exactly; the correlation-based ones need square roots and are generic
//! over [`Float`]. All pairwise sums run over ordered pairs of voters,
//! self-pairs included.
//!
//! An election whose saturation is 0 or 1 is necessarily an identity
//! election, and every index returns 1 on it.

use crate::election::{Ballot, Election};
use crate::error::{invalid, Result};
use crate::metrics::{hamming, PairKernel};
use crate::scalar::Scalar;
use num_traits::Float;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Approval agreement: (1/m) Σ_c |1 − 2|A(c)|/n|.
pub fn av_agr<T: Scalar>(e: &Election) -> T {
    let n = e.num_voters() as u64;
    let m = e.num_candidates() as u64;
    let sum = e
        .approval_scores()
        .into_iter()
        .fold(T::zero(), |acc, a| {
            acc + (T::one() - T::from_count(2) * T::ratio(a as u64, n)).abs()
        });
    sum / T::from_count(m)
}

/// A central vote together with its total Hamming distance to the ballots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralVote {
    pub ballot: Ballot,
    /// Σ_i ham(v_i, ballot)
    pub chd: usize,
}

/// The central vote that approves exactly the candidates backed by a strict
/// majority. A candidate approved by exactly half of the voters is left
/// unapproved; either choice gives the same `chd`.
pub fn central_vote(e: &Election) -> CentralVote {
    let n = e.num_voters();
    let scores = e.approval_scores();
    let mut ballot = Ballot::zeros(e.num_candidates());
    let mut chd = 0;
    for (j, &a) in scores.iter().enumerate() {
        if 2 * a > n {
            ballot.set(j, true);
            chd += n - a;
        } else {
            chd += a;
        }
    }
    CentralVote { ballot, chd }
}

/// Central agreement: 1 − chd / (n · min(avl, rev-avl)).
pub fn cntr_agr<T: Scalar>(e: &Election) -> T {
    let n = e.num_voters() as u64;
    let total = e.total_approvals() as u64;
    let cells = n * e.num_candidates() as u64;
    // n · min(avl, rev-avl) = min(total, n·m − total)
    let den = total.min(cells - total);
    if den == 0 {
        return T::one();
    }
    T::one() - T::ratio(central_vote(e).chd as u64, den)
}

/// Central agreement through the per-candidate closed form
/// 1 − Σ_c (1 − |1 − 2|A(c)|/n|) / (2 · min(avl, rev-avl)).
///
/// Needs no central vote; fails on elections with saturation 0 or 1.
pub fn cntr_agr_closed_form<T: Scalar>(e: &Election) -> Result<T> {
    let n = e.num_voters() as u64;
    let m = e.num_candidates() as u64;
    let total = e.total_approvals() as u64;
    let avl = T::ratio(total, n);
    let rev_avl = T::from_count(m) - avl;
    let denom = T::from_count(2) * avl.min_of(rev_avl);
    if denom == T::zero() {
        return invalid("central agreement closed form needs 0 < satr < 1");
    }
    let two = T::from_count(2);
    let sum = e.approval_scores().into_iter().fold(T::zero(), |acc, a| {
        acc + (T::one() - (T::one() - two * T::ratio(a as u64, n)).abs()) / denom
    });
    Ok(T::one() - sum)
}

fn satr<T: Scalar>(e: &Election) -> T {
    T::ratio(
        e.total_approvals() as u64,
        (e.num_voters() * e.num_candidates()) as u64,
    )
}

/// Hamming pairwise agreement in O(nm):
/// 1 − Σ_c |A(c)|(n − |A(c)|) / (n² m · satr(1 − satr)).
pub fn pair_agr<T: Scalar>(e: &Election) -> T {
    let s: T = satr(e);
    if s == T::zero() || s == T::one() {
        return T::one();
    }
    let n = e.num_voters() as u64;
    let m = e.num_candidates() as u64;
    let num = e
        .approval_scores()
        .into_iter()
        .fold(T::zero(), |acc, a| acc + T::from_count(a as u64 * (n - a as u64)));
    let den = T::from_count(n * n * m) * s * (T::one() - s);
    T::one() - num / den
}

/// Hamming pairwise agreement straight from its definition, summing
/// ham(u, v) over all ordered voter pairs. O(n²m); kept as a reference.
pub fn pair_agr_naive<T: Scalar>(e: &Election) -> Result<T> {
    let s: T = satr(e);
    if s == T::zero() || s == T::one() {
        return invalid("pairwise agreement needs 0 < satr < 1");
    }
    let ballots = e.ballots();
    let mut total = 0u64;
    for u in ballots {
        for v in ballots {
            total += hamming(u, v)? as u64;
        }
    }
    let n = e.num_voters() as u64;
    let m = e.num_candidates() as u64;
    let den = T::from_count(2 * n * n * m) * s * (T::one() - s);
    Ok(T::one() - T::from_count(total) / den)
}

/// Jaccard pairwise agreement: mean of 1 − jacc(u, v) over ordered pairs.
pub fn jacc_agr<T: Scalar>(e: &Election) -> T {
    let k = PairKernel::new(e);
    let n = k.num_voters();
    let mut sum = T::zero();
    for i in 0..n {
        for j in 0..n {
            sum = sum + (T::one() - k.counts(i, j).jaccard::<T>());
        }
    }
    sum / T::from_count((n * n) as u64)
}

/// PCC pairwise agreement: mean phi coefficient over ordered pairs.
///
/// The true value is nonnegative; floating-point residue above −1e−9 is
/// clamped to 0.
pub fn pcc_agr<T: Float>(e: &Election) -> T {
    let k = PairKernel::new(e);
    let n = k.num_voters();
    let sum = k.sum_ordered(|c| c.pcc::<f64>());
    let v = sum / (n * n) as f64;
    let v = if v < 0.0 && v > -1e-9 { 0.0 } else { v };
    T::from(v).unwrap()
}

/// PCC⁺ pairwise agreement: mean of max(0, pcc(u, v)) over ordered pairs.
pub fn pccplus_agr<T: Float>(e: &Election) -> T {
    let k = PairKernel::new(e);
    let n = k.num_voters();
    let sum = k.sum_ordered(|c| c.pcc::<f64>().max(0.0));
    T::from(sum / (n * n) as f64).unwrap()
}

/// Selector for one of the agreement indices, used wherever an index is a
/// parameter (clustering-based diversity and polarization, the CLI).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Av,
    Cntr,
    Pair,
    Pcc,
    Jacc,
    PccPlus,
}

impl Agreement {
    pub const ALL: [Agreement; 6] = [
        Agreement::Av,
        Agreement::Cntr,
        Agreement::Pair,
        Agreement::Pcc,
        Agreement::Jacc,
        Agreement::PccPlus,
    ];

    pub fn value(self, e: &Election) -> f64 {
        match self {
            Agreement::Av => av_agr(e),
            Agreement::Cntr => cntr_agr(e),
            Agreement::Pair => pair_agr(e),
            Agreement::Pcc => pcc_agr(e),
            Agreement::Jacc => jacc_agr(e),
            Agreement::PccPlus => pccplus_agr(e),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Agreement::Av => "av_agr",
            Agreement::Cntr => "cntr_agr",
            Agreement::Pair => "pair_agr",
            Agreement::Pcc => "pcc_agr",
            Agreement::Jacc => "jacc_agr",
            Agreement::PccPlus => "pccplus_agr",
        }
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Agreement {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Agreement::ALL
            .into_iter()
            .find(|a| a.name() == s || a.name().trim_end_matches("_agr") == s)
            .ok_or_else(|| crate::Error::InvalidArgument(format!("unknown agreement index {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;
    use crate::scalar::Exact;

    fn r2(x: f64) -> f64 {
        (x * 100.0).round() / 100.0
    }

    #[test]
    fn identity_elections_score_one() {
        for &p in &[0.05, 1.0 / 3.0, 0.5, 0.9] {
            let e = gen_p_id(60, 60, p).unwrap();
            for a in Agreement::ALL {
                assert!((a.value(&e) - 1.0).abs() < 1e-12, "{a} on {p}-ID");
            }
        }
        let empty = gen_p_id(10, 5, 0.0).unwrap();
        let full = empty.reverse();
        for a in Agreement::ALL {
            assert_eq!(a.value(&empty), 1.0, "{a}");
            assert_eq!(a.value(&full), 1.0, "{a}");
        }
    }

    #[test]
    fn av_agr_examples() {
        assert_eq!(av_agr::<f64>(&gen_k_party(60, 60, 2).unwrap()), 0.0);
        assert_eq!(r2(av_agr(&gen_k_party(60, 60, 3).unwrap())), 0.33);
        assert_eq!(r2(av_agr(&gen_diagonal(60).unwrap())), 0.97);
    }

    #[test]
    fn central_vote_examples() {
        let id = gen_p_id(60, 60, 1.0 / 3.0).unwrap();
        let cv = central_vote(&id);
        assert_eq!(cv.ballot, id.ballots()[0]);
        assert_eq!(cv.chd, 0);

        let two = gen_k_party(60, 60, 2).unwrap();
        let cv = central_vote(&two);
        assert_eq!(cv.ballot.count_ones(), 0);
        assert_eq!(cv.chd, 60 * 60 / 2);
    }

    /// Enumerates every member of cen(E) by brute force over all 2^m votes.
    fn all_central_votes(e: &Election) -> Vec<Ballot> {
        let m = e.num_candidates();
        let n = e.num_voters();
        let scores = e.approval_scores();
        (0u32..1 << m)
            .map(|mask| Ballot::from_bits(&(0..m).map(|j| mask >> j & 1 == 1).collect::<Vec<_>>()))
            .filter(|u| {
                (0..m).all(|j| {
                    let agree = if u.get(j) { scores[j] } else { n - scores[j] };
                    2 * agree >= n
                })
            })
            .collect()
    }

    #[test]
    fn chd_does_not_depend_on_central_vote_choice() {
        let mut with_ties = 0;
        for seed in 0..300 {
            let e = gen_p_ic(6, 6, 0.5, seed).unwrap();
            let chd = central_vote(&e).chd;
            let all = all_central_votes(&e);
            assert!(all.contains(&central_vote(&e).ballot));
            if all.len() > 1 {
                with_ties += 1;
            }
            for u in all {
                let d: usize = e.ballots().iter().map(|v| hamming(&u, v).unwrap()).sum();
                assert_eq!(d, chd);
            }
        }
        assert!(with_ties > 50);
    }

    #[test]
    fn cntr_agr_examples() {
        assert_eq!(cntr_agr::<f64>(&gen_diagonal(60).unwrap()), 0.0);
        // Triangle: chd = 435 + 465 = 900, n·min(avl, rev-avl) = 60 · 29.5
        let t: Exact = cntr_agr(&gen_triangle(60).unwrap());
        assert_eq!(t, Exact::new(29, 59));
        assert_eq!(r2(cntr_agr(&gen_triangle(60).unwrap())), 0.49);
    }

    #[test]
    fn cntr_closed_form_examples() {
        assert!(cntr_agr_closed_form::<f64>(&gen_k_party(60, 60, 2).unwrap()).unwrap().abs() < 1e-12);
        let e = gen_xy_two_party(60, 60, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert_eq!(cntr_agr_closed_form::<Exact>(&e).unwrap(), Exact::new(1, 4));
        // 19 candidates in the first group, 20 voters
        let e = gen_xy_two_party(60, 60, 19.0 / 60.0, 1.0 / 3.0).unwrap();
        assert_eq!(r2(cntr_agr_closed_form(&e).unwrap()), 0.24);
        assert!(cntr_agr_closed_form::<f64>(&gen_p_id(5, 5, 0.0).unwrap()).is_err());
    }

    #[test]
    fn closed_form_equals_distance_form_exactly() {
        for seed in 0..200 {
            let e = gen_p_ic(20, 20, 0.1 + 0.004 * seed as f64, seed).unwrap();
            let s = e.stats().satr;
            if s == 0.0 || s == 1.0 {
                continue;
            }
            let a: Exact = cntr_agr(&e);
            let b: Exact = cntr_agr_closed_form(&e).unwrap();
            assert_eq!(a, b, "seed {seed}");
        }
    }

    #[test]
    fn pair_agr_examples() {
        assert_eq!(pair_agr::<f64>(&gen_k_party(60, 60, 2).unwrap()), 0.0);
        assert_eq!(pair_agr::<f64>(&gen_cyclic(60).unwrap()).abs(), 0.0);
        assert_eq!(r2(pair_agr(&gen_triangle(60).unwrap())), 0.33);
        let mean: f64 = (0..10)
            .map(|s| pair_agr::<f64>(&gen_p_ic(60, 60, 0.5, s).unwrap()))
            .sum::<f64>()
            / 10.0;
        assert_eq!(r2(mean), 0.02);
    }

    #[test]
    fn fast_pair_agr_equals_naive_exactly() {
        for seed in 0..200 {
            let e = gen_p_ic(15, 15, 0.5, 1000 + seed).unwrap();
            let fast: Exact = pair_agr(&e);
            let naive: Exact = pair_agr_naive(&e).unwrap();
            assert_eq!(fast, naive);
        }
        assert!(pair_agr_naive::<f64>(&gen_p_id(4, 4, 1.0).unwrap()).is_err());
        assert_eq!(pair_agr_naive::<f64>(&gen_k_party(60, 60, 2).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn jacc_agr_examples() {
        assert_eq!(jacc_agr::<f64>(&gen_k_party(60, 60, 2).unwrap()), 0.5);
        assert_eq!(r2(jacc_agr(&gen_k_party(60, 60, 3).unwrap())), 0.33);
        let d: Exact = jacc_agr(&gen_diagonal(60).unwrap());
        assert_eq!(d, Exact::new(1, 60));
    }

    #[test]
    fn pcc_agr_examples() {
        for k in [2, 3, 4] {
            let e = gen_k_party(60, 60, k).unwrap();
            assert!(pcc_agr::<f64>(&e).abs() < 1e-12);
            assert!((pccplus_agr::<f64>(&e) - 1.0 / k as f64).abs() < 1e-12);
        }
        assert_eq!(r2(pcc_agr(&gen_triangle(60).unwrap())), 0.50);
        let e = gen_xy_two_party(60, 60, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert_eq!(r2(pccplus_agr(&e)), 0.56);
        let mean: f64 = (0..10)
            .map(|s| pccplus_agr::<f64>(&gen_p_ic(60, 60, 0.5, s).unwrap()))
            .sum::<f64>()
            / 10.0;
        assert_eq!(r2(mean), 0.07);
    }

    #[test]
    fn pcc_agr_equals_pair_agr_on_fixed_length_ballots() {
        let mut rng_seed = 5;
        for _ in 0..50 {
            rng_seed += 1;
            let e = gen_fixed_length(18, 12, 6, rng_seed);
            let a: f64 = pcc_agr(&e);
            let b: f64 = pair_agr(&e);
            assert!((a - b).abs() < 1e-10);
        }
    }

    fn gen_fixed_length(m: usize, n: usize, len: usize, seed: u64) -> Election {
        use rand::seq::index::sample;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let ballots = (0..n)
            .map(|_| Ballot::from_approved(m, sample(&mut rng, m, len).into_iter()).unwrap())
            .collect();
        Election::new(m, ballots).unwrap()
    }

    #[test]
    fn av_agr_zero_iff_every_candidate_split_in_half() {
        // exhaustive over all 4x4 elections
        for mask in 0u32..1 << 16 {
            let rows: Vec<Ballot> = (0..4)
                .map(|i| {
                    Ballot::from_bits(&(0..4).map(|j| mask >> (4 * i + j) & 1 == 1).collect::<Vec<_>>())
                })
                .collect();
            let e = Election::new(4, rows).unwrap();
            let zero = av_agr::<Exact>(&e) == Exact::from_count(0);
            let halves = e.approval_scores().iter().all(|&a| a == 2);
            assert_eq!(zero, halves);
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("pcc_agr".parse::<Agreement>().unwrap(), Agreement::Pcc);
        assert_eq!("cntr".parse::<Agreement>().unwrap(), Agreement::Cntr);
        assert!("nope".parse::<Agreement>().is_err());
    }
}
