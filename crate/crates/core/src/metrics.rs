//! Pairwise (dis)similarity between ballots: Hamming, Jaccard and the phi
//! coefficient (Pearson correlation of binary vectors).
//!
//! Everything is computed from the 2x2 contingency counts of a pair, which
//! in turn come from word-parallel popcounts.

use crate::election::{Ballot, Election};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use num_traits::Float;
use rayon::prelude::*;

/// Contingency counts of a ballot pair `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCounts {
    /// approved in both
    pub n11: usize,
    /// approved only in `u`
    pub n10: usize,
    /// approved only in `v`
    pub n01: usize,
    /// approved in neither
    pub n00: usize,
}

impl PairCounts {
    pub fn of(u: &Ballot, v: &Ballot) -> Result<Self> {
        check_lengths(u, v)?;
        let n11 = intersection(u.words(), v.words());
        Ok(Self::from_marginals(u.len(), u.count_ones(), v.count_ones(), n11))
    }

    /// Counts from the sizes |A(u)|, |A(v)| and |A(u) ∩ A(v)|.
    #[inline]
    pub fn from_marginals(m: usize, len_u: usize, len_v: usize, n11: usize) -> Self {
        PairCounts {
            n11,
            n10: len_u - n11,
            n01: len_v - n11,
            n00: m + n11 - len_u - len_v,
        }
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    #[inline]
    pub fn hamming(&self) -> usize {
        self.n10 + self.n01
    }

    /// Jaccard distance; two empty ballots are at distance 0.
    pub fn jaccard<T: Scalar>(&self) -> T {
        let union = self.n11 + self.n10 + self.n01;
        if union == 0 {
            return T::zero();
        }
        T::one() - T::ratio(self.n11 as u64, union as u64)
    }

    /// Phi coefficient. A constant ballot (all zeros or all ones) makes the
    /// denominator vanish, in which case the value is fixed to 1.
    pub fn pcc<T: Float>(&self) -> T {
        let c = |x: usize| T::from(x).unwrap();
        let (n11, n10, n01, n00) = (c(self.n11), c(self.n10), c(self.n01), c(self.n00));
        let den = (n10 + n11) * (n00 + n01) * (n01 + n11) * (n00 + n10);
        if den == T::zero() {
            return T::one();
        }
        (n00 * n11 - n01 * n10) / den.sqrt()
    }
}

fn check_lengths(u: &Ballot, v: &Ballot) -> Result<()> {
    if u.len() != v.len() {
        return invalid(format!("ballot lengths differ: {} vs {}", u.len(), v.len()));
    }
    Ok(())
}

#[inline]
fn intersection(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
fn xor_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

pub fn hamming(u: &Ballot, v: &Ballot) -> Result<usize> {
    check_lengths(u, v)?;
    Ok(xor_count(u.words(), v.words()))
}

pub fn jaccard<T: Scalar>(u: &Ballot, v: &Ballot) -> Result<T> {
    Ok(PairCounts::of(u, v)?.jaccard())
}

pub fn pcc<T: Float>(u: &Ballot, v: &Ballot) -> Result<T> {
    Ok(PairCounts::of(u, v)?.pcc())
}

/// Pearson correlation of two real vectors in mean-centered form, with the
/// same convention as [`pcc`] for constant vectors.
pub fn pearson_centered<T: Float>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return invalid("vector lengths differ");
    }
    if x.is_empty() {
        return invalid("empty vectors");
    }
    let len = T::from(x.len()).unwrap();
    let mx = x.iter().fold(T::zero(), |a, &b| a + b) / len;
    let my = y.iter().fold(T::zero(), |a, &b| a + b) / len;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Ok(T::one());
    }
    Ok(sxy / (sxx.sqrt() * syy.sqrt()))
}

/// The affine relation between phi and Hamming distance for two ballots
/// that both approve exactly `p * m` candidates: `1 - ham / (2 m p (1 - p))`.
pub fn pcc_from_hamming(p: f64, m: usize, ham: usize) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return invalid(format!("p must lie strictly between 0 and 1, got {p}"));
    }
    if m == 0 {
        return invalid("m must be positive");
    }
    Ok(1.0 - ham as f64 / (2.0 * m as f64 * p * (1.0 - p)))
}

/// All-pairs access to contingency counts over one election.
///
/// Ballot lengths are cached so each pair costs one AND-popcount pass.
pub struct PairKernel<'a> {
    election: &'a Election,
    lengths: Vec<usize>,
}

impl<'a> PairKernel<'a> {
    pub fn new(election: &'a Election) -> Self {
        let lengths = election.ballots().iter().map(Ballot::count_ones).collect();
        PairKernel { election, lengths }
    }

    #[inline]
    pub fn num_voters(&self) -> usize {
        self.lengths.len()
    }

    #[inline]
    pub fn counts(&self, i: usize, j: usize) -> PairCounts {
        let b = self.election.ballots();
        let n11 = intersection(b[i].words(), b[j].words());
        PairCounts::from_marginals(
            self.election.num_candidates(),
            self.lengths[i],
            self.lengths[j],
            n11,
        )
    }

    /// Row-major n x n matrix of `f(counts(i, j))`.
    ///
    /// Rows are filled independently, so the result does not depend on the
    /// number of worker threads.
    pub fn matrix<T, F>(&self, f: F) -> Vec<T>
    where
        T: Send + Copy + Default,
        F: Fn(PairCounts) -> T + Sync,
    {
        let n = self.num_voters();
        let mut out = vec![T::default(); n * n];
        out.par_chunks_mut(n.max(1)).enumerate().for_each(|(i, row)| {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = f(self.counts(i, j));
            }
        });
        out
    }

    /// Σ over ordered pairs (self-pairs included) of `f(counts(i, j))`,
    /// summed row by row in a fixed order.
    pub fn sum_ordered<F>(&self, f: F) -> f64
    where
        F: Fn(PairCounts) -> f64 + Sync,
    {
        let n = self.num_voters();
        let rows: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| f(self.counts(i, j))).sum::<f64>())
            .collect();
        rows.iter().sum()
    }
}

pub fn hamming_matrix(e: &Election) -> Vec<u32> {
    PairKernel::new(e).matrix(|c| c.hamming() as u32)
}

pub fn pcc_matrix(e: &Election) -> Vec<f64> {
    PairKernel::new(e).matrix(|c| c.pcc::<f64>())
}
