use crate::election::Election;
use crate::error::{invalid, Result};
use crate::indices::{evaluate, IndexKind, IndexSettings};
use serde::{Deserialize, Serialize};

/// Caps applied before computing map features.
pub const FEATURE_MAX_CANDIDATES: usize = 200;
pub const FEATURE_MAX_VOTERS: usize = 1000;

/// (agreement, diversity, polarization) values of one election.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub agr: f64,
    pub div: f64,
    pub pol: f64,
}

impl FeatureVector {
    pub fn as_array(&self) -> [f64; 3] {
        [self.agr, self.div, self.pol]
    }
}

/// Which indices make up a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureTriple {
    pub agr: IndexKind,
    pub div: IndexKind,
    pub pol: IndexKind,
}

impl Default for FeatureTriple {
    fn default() -> Self {
        FeatureTriple {
            agr: IndexKind::PccAgr,
            div: IndexKind::PccDiv,
            pol: IndexKind::PccPol,
        }
    }
}

impl FeatureTriple {
    pub fn kinds(&self) -> [IndexKind; 3] {
        [self.agr, self.div, self.pol]
    }
}

/// The default (pcc-agr, pcc-div, pcc-pol) features after subsampling to
/// at most 200 candidates and 1000 voters.
pub fn feature_vector(e: &Election, seed: u64) -> Result<FeatureVector> {
    feature_vector_with(e, &FeatureTriple::default(), &IndexSettings::with_seed(seed))
}

pub fn feature_vector_with(e: &Election, triple: &FeatureTriple, settings: &IndexSettings) -> Result<FeatureVector> {
    let sub = e.subsample(FEATURE_MAX_CANDIDATES, FEATURE_MAX_VOTERS, settings.seed)?;
    let v = evaluate(&sub, &triple.kinds(), settings)?;
    Ok(FeatureVector {
        agr: v[0],
        div: v[1],
        pol: v[2],
    })
}

/// Euclidean distance between two feature vectors.
pub fn feature_distance(a: &FeatureVector, b: &FeatureVector) -> f64 {
    a.as_array()
        .iter()
        .zip(b.as_array())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn distance_matrix(features: &[FeatureVector]) -> Vec<Vec<f64>> {
    features
        .iter()
        .map(|a| features.iter().map(|b| feature_distance(a, b)).collect())
        .collect()
}

/// True if every pair among `members` ranks within the top `fraction` of
/// all pairwise distances.
pub fn pairs_among_most_distant(d: &[Vec<f64>], members: &[usize], fraction: f64) -> Result<bool> {
    let n = d.len();
    if members.iter().any(|&i| i >= n) {
        return invalid("member index out of range");
    }
    let mut all: Vec<f64> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| d[i][j]).collect();
    if all.is_empty() {
        return Ok(true);
    }
    all.sort_by(|a, b| b.total_cmp(a));
    let keep = ((all.len() as f64 * fraction).ceil() as usize).clamp(1, all.len());
    let cutoff = all[keep - 1];
    Ok(members
        .iter()
        .enumerate()
        .all(|(a, &i)| members[a + 1..].iter().all(|&j| d[i][j] >= cutoff)))
}
