//! The thirteen reported election indices behind one enum, with shared
//! clustering work when several are evaluated together.

use crate::agreement::Agreement;
use crate::clustering::{Affinity, Clusterer, Partition};
use crate::divpol::{self, OuterDiversityConfig, MAX_CLUSTERS};
use crate::election::Election;
use crate::error::{Error, Result};
use crate::generators::derive_seed;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    Satr,
    AvAgr,
    CntrAgr,
    PairAgr,
    PccAgr,
    JaccAgr,
    PccplusAgr,
    CntrDiv,
    PccDiv,
    OutDiv,
    CntrPol,
    PccPol,
    PairPol,
}

impl IndexKind {
    pub const ALL: [IndexKind; 13] = [
        IndexKind::Satr,
        IndexKind::AvAgr,
        IndexKind::CntrAgr,
        IndexKind::PairAgr,
        IndexKind::PccAgr,
        IndexKind::JaccAgr,
        IndexKind::PccplusAgr,
        IndexKind::CntrDiv,
        IndexKind::PccDiv,
        IndexKind::OutDiv,
        IndexKind::CntrPol,
        IndexKind::PccPol,
        IndexKind::PairPol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Satr => "satr",
            IndexKind::AvAgr => "av_agr",
            IndexKind::CntrAgr => "cntr_agr",
            IndexKind::PairAgr => "pair_agr",
            IndexKind::PccAgr => "pcc_agr",
            IndexKind::JaccAgr => "jacc_agr",
            IndexKind::PccplusAgr => "pccplus_agr",
            IndexKind::CntrDiv => "cntr_div",
            IndexKind::PccDiv => "pcc_div",
            IndexKind::OutDiv => "out_div",
            IndexKind::CntrPol => "cntr_pol",
            IndexKind::PccPol => "pcc_pol",
            IndexKind::PairPol => "pair_pol",
        }
    }

    /// The agreement index this one reduces to, if any.
    pub fn agreement(self) -> Option<Agreement> {
        match self {
            IndexKind::AvAgr => Some(Agreement::Av),
            IndexKind::CntrAgr => Some(Agreement::Cntr),
            IndexKind::PairAgr => Some(Agreement::Pair),
            IndexKind::PccAgr => Some(Agreement::Pcc),
            IndexKind::JaccAgr => Some(Agreement::Jacc),
            IndexKind::PccplusAgr => Some(Agreement::PccPlus),
            _ => None,
        }
    }

    pub fn is_randomized(self) -> bool {
        matches!(
            self,
            IndexKind::CntrDiv | IndexKind::PccDiv | IndexKind::OutDiv | IndexKind::CntrPol | IndexKind::PccPol
        )
    }

    pub fn value(self, e: &Election, settings: &IndexSettings) -> Result<f64> {
        Ok(evaluate(e, &[self], settings)?[0])
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('+', "plus").replace('-', "_");
        IndexKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown index `{s}`")))
    }
}

/// Hyperparameters and seed shared by all randomized indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IndexSettings {
    pub seed: u64,
    pub kmedoids_restarts: usize,
    pub affinity: Affinity,
    pub sample_multiplier: usize,
}

impl Default for IndexSettings {
    fn default() -> Self {
        IndexSettings {
            seed: 0,
            kmedoids_restarts: 10,
            affinity: Affinity::Rescaled,
            sample_multiplier: 5,
        }
    }
}

impl IndexSettings {
    pub fn with_seed(seed: u64) -> Self {
        IndexSettings {
            seed,
            ..Default::default()
        }
    }

    fn kmedoids(&self) -> Clusterer {
        Clusterer::KMedoids {
            restarts: self.kmedoids_restarts,
        }
    }

    fn spectral(&self) -> Clusterer {
        Clusterer::Spectral {
            affinity: self.affinity,
        }
    }
}

/// Evaluates `kinds` on one election. Clusterings are computed at most
/// once per heuristic and shared between the diversity and polarization
/// indices that use them.
pub fn evaluate(e: &Election, kinds: &[IndexKind], settings: &IndexSettings) -> Result<Vec<f64>> {
    let clusterer_seed = derive_seed(settings.seed, 1);
    let wants = |a: IndexKind, b: IndexKind| kinds.contains(&a) || kinds.contains(&b);
    let kmedoids: Vec<Partition> = if wants(IndexKind::CntrDiv, IndexKind::CntrPol) {
        settings.kmedoids().partitions(e, MAX_CLUSTERS, clusterer_seed)?
    } else {
        Vec::new()
    };
    let spectral: Vec<Partition> = if wants(IndexKind::PccDiv, IndexKind::PccPol) {
        settings.spectral().partitions(e, MAX_CLUSTERS, clusterer_seed)?
    } else {
        Vec::new()
    };
    let mut out = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let v = match kind {
            IndexKind::Satr => e.stats().satr,
            IndexKind::CntrDiv => divpol::a_div_from_partitions(e, Agreement::Cntr, &kmedoids)?,
            IndexKind::PccDiv => divpol::a_div_from_partitions(e, Agreement::Pcc, &spectral)?,
            IndexKind::CntrPol => divpol::a_pol_from_partition(e, Agreement::Cntr, &kmedoids[1])?,
            IndexKind::PccPol => divpol::a_pol_from_partition(e, Agreement::Pcc, &spectral[1])?,
            IndexKind::OutDiv => {
                let cfg = OuterDiversityConfig::new(settings.sample_multiplier, derive_seed(settings.seed, 2))?;
                divpol::out_div(e, &cfg)?
            }
            IndexKind::PairPol => divpol::pair_pol(e),
            other => other.agreement().expect("agreement index").value(e),
        };
        out.push(v);
    }
    Ok(out)
}
