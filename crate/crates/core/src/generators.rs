//! Special elections and seeded samplers for the statistical cultures.
//!
//! Randomness comes from ChaCha8 (`rand_chacha` 0.3). Every voter draws
//! from its own stream of the generator keyed by the election seed, so the
//! sampled election does not depend on generation order or thread count.

use crate::election::{Ballot, Election};
use crate::error::{invalid, Result};
use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Stream reserved for election-level draws (group structure, positions).
const SHARED_STREAM: u64 = u64::MAX;

fn voter_rng(seed: u64, voter: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(voter as u64);
    rng
}

fn shared_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SHARED_STREAM);
    rng
}

/// Derives a child seed; used for per-sample and per-cell seeding.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("{name} must lie in [0, 1], got {p}"));
    }
    Ok(())
}

fn check_sizes(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return invalid(format!("sizes must be positive, got m={m} n={n}"));
    }
    Ok(())
}

/// ⌊x·total⌋, robust to representation error such as (1/3)·60 = 19.999….
fn floor_fraction(x: f64, total: usize) -> usize {
    ((x * total as f64 + 1e-9).floor() as usize).min(total)
}

/// Splits `total` into `k` consecutive blocks whose sizes differ by at most
/// one; earlier blocks receive the remainder.
fn even_blocks(total: usize, k: usize) -> Vec<usize> {
    (0..k).map(|g| total / k + usize::from(g < total % k)).collect()
}

/// Every voter approves blocks[g] candidates of group `g`, where voter groups
/// and candidate groups are laid out consecutively.
fn party_election(m: usize, cand_blocks: &[usize], voter_blocks: &[usize]) -> Result<Election> {
    let mut ballots = Vec::new();
    let mut start = 0;
    for (g, &vc) in voter_blocks.iter().enumerate() {
        let len = cand_blocks[g];
        let b = Ballot::from_approved(m, start..start + len)?;
        ballots.extend(std::iter::repeat_n(b, vc));
        start += len;
    }
    Election::new(m, ballots)
}

fn bernoulli_ballot(rng: &mut impl Rng, probs: impl Iterator<Item = f64>, m: usize) -> Ballot {
    let mut b = Ballot::zeros(m);
    for (j, p) in probs.enumerate() {
        if rng.gen::<f64>() < p {
            b.set(j, true);
        }
    }
    b
}

fn sample_voters<F>(m: usize, n: usize, seed: u64, f: F) -> Result<Election>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Ballot + Sync,
{
    let ballots = (0..n)
        .into_par_iter()
        .map(|i| f(i, &mut voter_rng(seed, i)))
        .collect();
    Election::new(m, ballots)
}

/// p-ID: everyone approves the first ⌊pm⌋ candidates.
pub fn gen_p_id(m: usize, n: usize, p: f64) -> Result<Election> {
    check_sizes(m, n)?;
    check_prob("p", p)?;
    let b = Ballot::from_approved(m, 0..floor_fraction(p, m))?;
    Election::new(m, vec![b; n])
}

pub fn gen_k_party(m: usize, n: usize, k: usize) -> Result<Election> {
    check_sizes(m, n)?;
    if k == 0 || k > m.min(n) {
        return invalid(format!("k-Party needs 1 <= k <= min(m, n), got k={k}"));
    }
    party_election(m, &even_blocks(m, k), &even_blocks(n, k))
}

/// (x, y)-2-Party: the first party holds ⌊xm⌋ candidates and ⌊yn⌋ voters.
pub fn gen_xy_two_party(m: usize, n: usize, x: f64, y: f64) -> Result<Election> {
    check_sizes(m, n)?;
    check_prob("x", x)?;
    check_prob("y", y)?;
    let c1 = floor_fraction(x, m);
    let v1 = floor_fraction(y, n);
    party_election(m, &[c1, m - c1], &[v1, n - v1])
}

/// m-Party with m voters: voter i approves only candidate i.
pub fn gen_diagonal(m: usize) -> Result<Election> {
    gen_k_party(m, m, m)
}

/// Voter i (1-based) approves the first i candidates.
pub fn gen_triangle(m: usize) -> Result<Election> {
    check_sizes(m, m)?;
    let ballots = (1..=m)
        .map(|i| Ballot::from_approved(m, 0..i))
        .collect::<Result<Vec<_>>>()?;
    Election::new(m, ballots)
}

/// The first voter approves candidate 1 and the last ⌊m/2⌋ − 1 candidates;
/// each next voter is the previous one shifted cyclically by one position.
pub fn gen_cyclic(m: usize) -> Result<Election> {
    check_sizes(m, m)?;
    let tail = (m / 2).saturating_sub(1);
    let first: Vec<usize> = std::iter::once(0).chain(m - tail..m).collect();
    let ballots = (0..m)
        .map(|shift| Ballot::from_approved(m, first.iter().map(|&j| (j + shift) % m)))
        .collect::<Result<Vec<_>>>()?;
    Election::new(m, ballots)
}

/// p-IC: every entry is an independent Bernoulli(p).
pub fn gen_p_ic(m: usize, n: usize, p: f64, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    check_prob("p", p)?;
    sample_voters(m, n, seed, |_, rng| {
        bernoulli_ballot(rng, std::iter::repeat_n(p, m), m)
    })
}

/// Independent approval model with per-candidate probabilities.
pub fn gen_iam(m: usize, n: usize, probs: &[f64], seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    if probs.len() != m {
        return invalid(format!("IAM needs {m} probabilities, got {}", probs.len()));
    }
    for &p in probs {
        check_prob("IAM probability", p)?;
    }
    sample_voters(m, n, seed, |_, rng| bernoulli_ballot(rng, probs.iter().copied(), m))
}

fn resample_ballot(rng: &mut impl Rng, central: &Ballot, p: f64, phi: f64) -> Ballot {
    let m = central.len();
    let mut b = Ballot::zeros(m);
    for j in 0..m {
        let bit = if rng.gen::<f64>() < phi {
            rng.gen::<f64>() < p
        } else {
            central.get(j)
        };
        if bit {
            b.set(j, true);
        }
    }
    b
}

/// (p, φ)-resampling around the central vote approving the first ⌊pm⌋.
pub fn gen_resampling(m: usize, n: usize, p: f64, phi: f64, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    check_prob("p", p)?;
    check_prob("phi", phi)?;
    let central = Ballot::from_approved(m, 0..floor_fraction(p, m))?;
    if phi == 0.0 {
        return Election::new(m, vec![central; n]);
    }
    sample_voters(m, n, seed, |_, rng| resample_ballot(rng, &central, p, phi))
}

/// The five 2-D Euclidean variants: voters and candidates uniform on the
/// unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EuclideanVariant {
    /// approve within a fixed radius
    Radius(f64),
    /// approve within a radius drawn per voter from U[0, max]
    RandomRadius(f64),
    /// approve the min(count, m) nearest candidates
    Nearest(usize),
    /// approve a number of nearest candidates drawn from U{1..m}
    RandomNearest,
}

impl EuclideanVariant {
    /// Variants 1 to 5 in the order of the original experiment suite.
    pub fn numbered(variant: u8) -> Result<Self> {
        Ok(match variant {
            1 => EuclideanVariant::Radius(0.117),
            2 => EuclideanVariant::Radius(0.167),
            3 => EuclideanVariant::RandomRadius(0.5),
            4 => EuclideanVariant::Nearest(10),
            5 => EuclideanVariant::RandomNearest,
            _ => return invalid(format!("euclidean variant must be 1..=5, got {variant}")),
        })
    }
}

pub fn gen_euclidean(m: usize, n: usize, variant: EuclideanVariant, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    let mut shared = shared_rng(seed);
    let cands: Vec<(f64, f64)> = (0..m).map(|_| (shared.gen(), shared.gen())).collect();
    sample_voters(m, n, seed, |_, rng| {
        let pos: (f64, f64) = (rng.gen(), rng.gen());
        let dist: Vec<f64> = cands
            .iter()
            .map(|c| ((c.0 - pos.0).powi(2) + (c.1 - pos.1).powi(2)).sqrt())
            .collect();
        let within = |r: f64| {
            let mut b = Ballot::zeros(m);
            for (j, &d) in dist.iter().enumerate() {
                if d < r {
                    b.set(j, true);
                }
            }
            b
        };
        let nearest = |count: usize| {
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
            Ballot::from_approved(m, order.into_iter().take(count.min(m))).unwrap()
        };
        match variant {
            EuclideanVariant::Radius(r) => within(r),
            EuclideanVariant::RandomRadius(max) => within(rng.gen::<f64>() * max),
            EuclideanVariant::Nearest(count) => nearest(count),
            EuclideanVariant::RandomNearest => nearest(rng.gen_range(1..=m)),
        }
    })
}

/// The first ⌊n/2⌋ voters form a p-ID election, the rest are p-IC.
pub fn gen_id_ic(m: usize, n: usize, p: f64, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    check_prob("p", p)?;
    let half = n / 2;
    let id = Ballot::from_approved(m, 0..floor_fraction(p, m))?;
    sample_voters(m, n, seed, |i, rng| {
        if i < half {
            id.clone()
        } else {
            bernoulli_ballot(rng, std::iter::repeat_n(p, m), m)
        }
    })
}

/// Voter i (0-based) is drawn from (1 − i/n)-IC.
pub fn gen_lin_ic(m: usize, n: usize, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    sample_voters(m, n, seed, |i, rng| {
        let p = 1.0 - i as f64 / n as f64;
        bernoulli_ballot(rng, std::iter::repeat_n(p, m), m)
    })
}

/// Replaces each vote v by a (q, φ)-resampling draw centred at v itself,
/// where q is the fraction of candidates v approves.
pub fn gen_noisy(base: &Election, phi: f64, seed: u64) -> Result<Election> {
    check_prob("phi", phi)?;
    let m = base.num_candidates();
    let ballots = base.ballots();
    let mut e = sample_voters(m, base.num_voters(), seed, |i, rng| {
        if phi == 0.0 {
            return ballots[i].clone();
        }
        let q = ballots[i].count_ones() as f64 / m as f64;
        resample_ballot(rng, &ballots[i], q, phi)
    })?;
    if let Some(l) = base.label() {
        e = e.with_label(l);
    }
    Ok(e)
}

fn random_groups(n: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..k)).collect()
}

/// Voters split uniformly at random into k groups; each group shares one
/// ballot drawn from p-IC.
pub fn gen_id_mixture(m: usize, n: usize, k: usize, p: f64, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    check_prob("p", p)?;
    if k == 0 {
        return invalid("ID mixture needs k >= 1");
    }
    let mut shared = shared_rng(seed);
    let groups = random_groups(n, k, &mut shared);
    let prototypes: Vec<Ballot> = (0..k)
        .map(|_| bernoulli_ballot(&mut shared, std::iter::repeat_n(p, m), m))
        .collect();
    Election::new(m, groups.into_iter().map(|g| prototypes[g].clone()).collect())
}

/// Voters split uniformly at random into k groups; each group samples from
/// its own IAM with probabilities drawn from U[0, 1].
pub fn gen_iam_mixture(m: usize, n: usize, k: usize, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    if k == 0 {
        return invalid("IAM mixture needs k >= 1");
    }
    let mut shared = shared_rng(seed);
    let groups = random_groups(n, k, &mut shared);
    let probs: Vec<Vec<f64>> = (0..k)
        .map(|_| (0..m).map(|_| shared.gen::<f64>()).collect())
        .collect();
    sample_voters(m, n, seed, |i, rng| {
        bernoulli_ballot(rng, probs[groups[i]].iter().copied(), m)
    })
}

/// A uniformly random composition of `total` into `k` positive parts
/// (stars and bars: k − 1 distinct cut points among the total − 1 gaps).
fn random_composition(total: usize, k: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut cuts: Vec<usize> = sample(rng, total - 1, k - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(total);
    let mut prev = 0;
    cuts.into_iter()
        .map(|c| {
            let part = c - prev;
            prev = c;
            part
        })
        .collect()
}

/// Party list with k = 3 + Poisson(1) parties of random sizes, drawn
/// independently for candidates and voters.
pub fn gen_uneven_party_list(m: usize, n: usize, seed: u64) -> Result<Election> {
    check_sizes(m, n)?;
    let mut shared = shared_rng(seed);
    let poisson = Poisson::new(1.0).expect("valid rate");
    let k = (3 + poisson.sample(&mut shared) as usize).min(m.min(n));
    let cands = random_composition(m, k, &mut shared);
    let mut voters = random_composition(n, k, &mut shared);
    // party order is arbitrary; decouple which candidate block pairs with which voter block
    voters.shuffle(&mut shared);
    party_election(m, &cands, &voters)
}

/// A statistical culture or special election family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Culture {
    PId { p: f64 },
    KParty { k: usize },
    XyTwoParty { x: f64, y: f64 },
    Diagonal,
    Triangle,
    Cyclic,
    PIc { p: f64 },
    Iam { probs: Vec<f64> },
    Resampling { p: f64, phi: f64 },
    Euclidean { variant: u8 },
    IdIc { p: f64 },
    LinIc,
    Noisy { base: Box<Culture>, phi: f64 },
    IdMixture { k: usize, p: f64 },
    IamMixture { k: usize },
    UnevenPartyList,
}

impl Culture {
    pub fn family(&self) -> &'static str {
        match self {
            Culture::PId { .. } => "p_id",
            Culture::KParty { .. } => "k_party",
            Culture::XyTwoParty { .. } => "xy_two_party",
            Culture::Diagonal => "diagonal",
            Culture::Triangle => "triangle",
            Culture::Cyclic => "cyclic",
            Culture::PIc { .. } => "p_ic",
            Culture::Iam { .. } => "iam",
            Culture::Resampling { .. } => "resampling",
            Culture::Euclidean { .. } => "euclidean",
            Culture::IdIc { .. } => "id_ic",
            Culture::LinIc => "lin_ic",
            Culture::Noisy { .. } => "noisy",
            Culture::IdMixture { .. } => "id_mixture",
            Culture::IamMixture { .. } => "iam_mixture",
            Culture::UnevenPartyList => "uneven_party_list",
        }
    }

    /// True when the family never consumes randomness.
    pub fn is_deterministic(&self) -> bool {
        matches!(
            self,
            Culture::PId { .. }
                | Culture::KParty { .. }
                | Culture::XyTwoParty { .. }
                | Culture::Diagonal
                | Culture::Triangle
                | Culture::Cyclic
        )
    }

    /// Checks parameter ranges, returning the offending field name and a
    /// message on failure.
    pub fn validate(&self, m: usize, n: usize) -> std::result::Result<(), (String, String)> {
        let prob = |field: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err((field.to_string(), format!("must lie in [0, 1], got {v}")))
            }
        };
        if m == 0 || n == 0 {
            return Err(("m".into(), "sizes must be positive".into()));
        }
        let square = || {
            if m == n {
                Ok(())
            } else {
                Err(("n".into(), format!("{} needs n = m", self.family())))
            }
        };
        match self {
            Culture::PId { p } | Culture::PIc { p } | Culture::IdIc { p } => prob("p", *p),
            Culture::KParty { k } => {
                if *k == 0 || *k > m.min(n) {
                    Err(("k".into(), format!("must lie in 1..={}, got {k}", m.min(n))))
                } else {
                    Ok(())
                }
            }
            Culture::XyTwoParty { x, y } => prob("x", *x).and(prob("y", *y)),
            Culture::Diagonal | Culture::Triangle | Culture::Cyclic => square(),
            Culture::Iam { probs } => {
                if probs.len() != m {
                    return Err(("probs".into(), format!("needs {m} entries, got {}", probs.len())));
                }
                for (i, &p) in probs.iter().enumerate() {
                    prob(&format!("probs/{i}"), p)?;
                }
                Ok(())
            }
            Culture::Resampling { p, phi } => prob("p", *p).and(prob("phi", *phi)),
            Culture::Euclidean { variant } => {
                if (1..=5).contains(variant) {
                    Ok(())
                } else {
                    Err(("variant".into(), format!("must lie in 1..=5, got {variant}")))
                }
            }
            Culture::LinIc | Culture::UnevenPartyList => Ok(()),
            Culture::Noisy { base, phi } => {
                prob("phi", *phi)?;
                base.validate(m, n).map_err(|(f, msg)| (format!("base/{f}"), msg))
            }
            Culture::IdMixture { k, p } => {
                prob("p", *p)?;
                if *k == 0 {
                    Err(("k".into(), "must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
            Culture::IamMixture { k } => {
                if *k == 0 {
                    Err(("k".into(), "must be at least 1".into()))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn generate(&self, m: usize, n: usize, seed: u64) -> Result<Election> {
        let square = || {
            if m == n {
                Ok(())
            } else {
                invalid(format!("{} needs n = m, got m={m} n={n}", self.family()))
            }
        };
        match self {
            Culture::PId { p } => gen_p_id(m, n, *p),
            Culture::KParty { k } => gen_k_party(m, n, *k),
            Culture::XyTwoParty { x, y } => gen_xy_two_party(m, n, *x, *y),
            Culture::Diagonal => square().and_then(|_| gen_diagonal(m)),
            Culture::Triangle => square().and_then(|_| gen_triangle(m)),
            Culture::Cyclic => square().and_then(|_| gen_cyclic(m)),
            Culture::PIc { p } => gen_p_ic(m, n, *p, seed),
            Culture::Iam { probs } => gen_iam(m, n, probs, seed),
            Culture::Resampling { p, phi } => gen_resampling(m, n, *p, *phi, seed),
            Culture::Euclidean { variant } => {
                gen_euclidean(m, n, EuclideanVariant::numbered(*variant)?, seed)
            }
            Culture::IdIc { p } => gen_id_ic(m, n, *p, seed),
            Culture::LinIc => gen_lin_ic(m, n, seed),
            Culture::Noisy { base, phi } => {
                let b = base.generate(m, n, derive_seed(seed, 0xba5e))?;
                gen_noisy(&b, *phi, seed)
            }
            Culture::IdMixture { k, p } => gen_id_mixture(m, n, *k, *p, seed),
            Culture::IamMixture { k } => gen_iam_mixture(m, n, *k, seed),
            Culture::UnevenPartyList => gen_uneven_party_list(m, n, seed),
        }
    }
}

/// A culture together with election size, seed and an optional display label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CultureSpec {
    #[serde(flatten)]
    pub culture: Culture,
    pub m: usize,
    pub n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl CultureSpec {
    pub fn new(culture: Culture, m: usize, n: usize) -> Self {
        CultureSpec {
            culture,
            m,
            n,
            seed: 0,
            label: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn display_label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| self.culture.family().to_string())
    }

    pub fn generate(&self) -> Result<Election> {
        self.generate_with_seed(self.seed)
    }

    pub fn generate_with_seed(&self, seed: u64) -> Result<Election> {
        Ok(self
            .culture
            .generate(self.m, self.n, seed)?
            .with_label(self.display_label()))
    }
}
