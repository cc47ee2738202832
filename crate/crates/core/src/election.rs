//! Approval elections stored as packed bitsets.

use crate::error::{invalid, Result};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A binary approval vector over `len` candidates.
///
/// Bits past `len` in the last word are always zero, so popcounts over the
/// raw words are exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ballot {
    words: Vec<u64>,
    len: usize,
}

impl Ballot {
    pub fn zeros(len: usize) -> Self {
        Ballot {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Ballot {
            words: vec![u64::MAX; words_for(len)],
            len,
        };
        b.clear_tail();
        b
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut b = Ballot::zeros(bits.len());
        for (j, &bit) in bits.iter().enumerate() {
            if bit {
                b.set(j, true);
            }
        }
        b
    }

    /// Builds a ballot approving exactly the listed candidates.
    pub fn from_approved(len: usize, approved: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut b = Ballot::zeros(len);
        for j in approved {
            if j >= len {
                return invalid(format!("candidate {j} out of range for {len} candidates"));
            }
            b.set(j, true);
        }
        Ok(b)
    }

    /// Parses a string of `0`/`1` characters, e.g. `"110000"`.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return invalid(format!("unexpected character {ch:?} in ballot")),
            }
        }
        Ok(Ballot::from_bits(&bits))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        debug_assert!(j < self.len);
        (self.words[j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize, value: bool) {
        assert!(j < self.len, "candidate {j} out of range");
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            self.words[j / WORD_BITS] |= mask;
        } else {
            self.words[j / WORD_BITS] &= !mask;
        }
    }

    /// Number of approved candidates, |A(v)|.
    #[inline]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn approved(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&j| self.get(j))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|j| self.get(j)).collect()
    }

    pub fn complement(&self) -> Ballot {
        let mut b = Ballot {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        b.clear_tail();
        b
    }

    /// Keeps only the given candidate positions, in the given order.
    pub fn restrict(&self, candidates: &[usize]) -> Ballot {
        let mut b = Ballot::zeros(candidates.len());
        for (k, &j) in candidates.iter().enumerate() {
            if self.get(j) {
                b.set(k, true);
            }
        }
        b
    }
}

impl fmt::Debug for Ballot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|j| if self.get(j) { '1' } else { '0' })
            .collect();
        write!(f, "Ballot({s})")
    }
}

/// Average vote length, its reverse, and saturation of an election.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectionStats {
    pub avl: f64,
    pub rev_avl: f64,
    pub satr: f64,
}

/// An approval election: `m` candidates and an ordered collection of ballots.
///
/// Duplicate ballots are kept with multiplicity. Elections are immutable once
/// built.
#[derive(Clone, PartialEq, Eq)]
pub struct Election {
    num_candidates: usize,
    ballots: Vec<Ballot>,
    label: Option<String>,
}

impl Election {
    pub fn new(num_candidates: usize, ballots: Vec<Ballot>) -> Result<Self> {
        if num_candidates == 0 {
            return invalid("an election needs at least one candidate");
        }
        if ballots.is_empty() {
            return invalid("an election needs at least one voter");
        }
        if let Some((i, b)) = ballots
            .iter()
            .enumerate()
            .find(|(_, b)| b.len() != num_candidates)
        {
            return invalid(format!(
                "ballot {i} has {} entries, expected {num_candidates}",
                b.len()
            ));
        }
        Ok(Election {
            num_candidates,
            ballots,
            label: None,
        })
    }

    /// Builds an election from `0`/`1` strings, one per voter.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let ballots = rows
            .iter()
            .map(|r| Ballot::parse_bits(r))
            .collect::<Result<Vec<_>>>()?;
        let m = ballots.first().map(Ballot::len).unwrap_or(0);
        Election::new(m, ballots)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    #[inline]
    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    #[inline]
    pub fn num_voters(&self) -> usize {
        self.ballots.len()
    }

    #[inline]
    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// |A(c_j)|: the number of voters approving candidate `j`.
    pub fn approval_score(&self, j: usize) -> Result<usize> {
        if j >= self.num_candidates {
            return invalid(format!(
                "candidate {j} out of range for {} candidates",
                self.num_candidates
            ));
        }
        Ok(self.ballots.iter().filter(|b| b.get(j)).count())
    }

    /// Approval scores of all candidates, computed in one pass over the words.
    pub fn approval_scores(&self) -> Vec<usize> {
        let mut scores = vec![0usize; self.num_candidates];
        for b in &self.ballots {
            for (w, &word) in b.words().iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let t = bits.trailing_zeros() as usize;
                    scores[w * WORD_BITS + t] += 1;
                    bits &= bits - 1;
                }
            }
        }
        scores
    }

    /// Σ_v |A(v)|, the total number of approvals.
    pub fn total_approvals(&self) -> usize {
        self.ballots.iter().map(Ballot::count_ones).sum()
    }

    pub fn stats(&self) -> ElectionStats {
        let m = self.num_candidates as f64;
        let avl = self.total_approvals() as f64 / self.num_voters() as f64;
        ElectionStats {
            avl,
            rev_avl: m - avl,
            satr: avl / m,
        }
    }

    /// The reverse election E⁻¹ with every entry flipped.
    pub fn reverse(&self) -> Election {
        Election {
            num_candidates: self.num_candidates,
            ballots: self.ballots.iter().map(Ballot::complement).collect(),
            label: self.label.clone(),
        }
    }

    /// The sub-election formed by the given voters (candidates unchanged).
    pub fn restrict_voters(&self, voters: &[usize]) -> Result<Election> {
        let ballots = voters
            .iter()
            .map(|&i| {
                self.ballots.get(i).cloned().ok_or_else(|| {
                    crate::Error::InvalidArgument(format!("voter {i} out of range"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Election::new(self.num_candidates, ballots)
    }

    /// Caps the election at `max_candidates` x `max_voters` by seeded uniform
    /// sampling without replacement. Relative order of the kept candidates
    /// and voters is preserved; an election within both caps is returned
    /// unchanged.
    pub fn subsample(&self, max_candidates: usize, max_voters: usize, seed: u64) -> Result<Election> {
        if max_candidates == 0 || max_voters == 0 {
            return invalid("subsample caps must be at least 1");
        }
        let m = self.num_candidates;
        let n = self.num_voters();
        if m <= max_candidates && n <= max_voters {
            return Ok(self.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut candidates: Vec<usize> = if m > max_candidates {
            sample(&mut rng, m, max_candidates).into_vec()
        } else {
            (0..m).collect()
        };
        candidates.sort_unstable();
        let mut voters: Vec<usize> = if n > max_voters {
            sample(&mut rng, n, max_voters).into_vec()
        } else {
            (0..n).collect()
        };
        voters.sort_unstable();
        let ballots = voters
            .iter()
            .map(|&i| {
                if m > max_candidates {
                    self.ballots[i].restrict(&candidates)
                } else {
                    self.ballots[i].clone()
                }
            })
            .collect();
        let mut e = Election::new(candidates.len(), ballots)?;
        e.label = self.label.clone();
        Ok(e)
    }
}

impl fmt::Debug for Election {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Election")
            .field("label", &self.label)
            .field("num_candidates", &self.num_candidates)
            .field("num_voters", &self.num_voters())
            .finish()
    }
}
