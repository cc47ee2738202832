//! The compass elections of the index table and the synthetic map corpus.

use crate::generators::{Culture, CultureSpec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// One election of a map manifest; `group` decides its color.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapElection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(flatten)]
    pub spec: CultureSpec,
}

impl MapElection {
    pub fn group_name(&self) -> String {
        self.group.clone().unwrap_or_else(|| self.spec.display_label())
    }
}

pub const COMPASS_SIZE: usize = 60;

/// The fourteen example elections, 60 x 60, in table order.
pub fn compass_specs() -> Vec<CultureSpec> {
    let s = COMPASS_SIZE;
    let noisy = |base: Culture, phi: f64| Culture::Noisy {
        base: Box::new(base),
        phi,
    };
    let rows: Vec<(&str, Culture)> = vec![
        ("1/3-ID", Culture::PId { p: 1.0 / 3.0 }),
        ("2-Party", Culture::KParty { k: 2 }),
        ("N(2-Party,0.6)", noisy(Culture::KParty { k: 2 }, 0.6)),
        ("3-Party", Culture::KParty { k: 3 }),
        ("4-Party", Culture::KParty { k: 4 }),
        // 19 of 60 candidates in the first group, see the README
        ("(1/3,1/3)-2-Party", Culture::XyTwoParty { x: 19.0 / 60.0, y: 1.0 / 3.0 }),
        ("Cyclic", Culture::Cyclic),
        ("Diagonal", Culture::Diagonal),
        ("Triangle", Culture::Triangle),
        ("N(Tri,0.6)", noisy(Culture::Triangle, 0.6)),
        ("1/2-ID/IC", Culture::IdIc { p: 0.5 }),
        ("1/2-IC", Culture::PIc { p: 0.5 }),
        ("1/4-IC", Culture::PIc { p: 0.25 }),
        ("Lin-IC", Culture::LinIc),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(i, (label, c))| CultureSpec::new(c, s, s).with_seed(i as u64).with_label(label))
        .collect()
}

/// The synthetic map corpus: compass plus the sampled families, with
/// random parameters drawn from `seed`.
pub fn synthetic_map_specs(seed: u64) -> Vec<MapElection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<MapElection> = compass_specs()
        .into_iter()
        .map(|spec| MapElection {
            group: Some("Compass".into()),
            spec,
        })
        .collect();
    let mut push = |group: &str, c: Culture, m: usize, n: usize| {
        let i = out.len() as u64;
        out.push(MapElection {
            group: Some(group.into()),
            spec: CultureSpec::new(c, m, n).with_seed(i),
        });
    };
    for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
        for _ in 0..2 {
            push("IC", Culture::PIc { p }, 100, 1000);
        }
    }
    for _ in 0..5 {
        push("Lin-IC", Culture::LinIc, 100, 1000);
    }
    for _ in 0..50 {
        let (p, phi) = (rng.gen::<f64>(), rng.gen::<f64>());
        push("Resampling", Culture::Resampling { p, phi }, 100, 1000);
    }
    for _ in 0..25 {
        let phi = rng.gen::<f64>();
        let c = Culture::Noisy {
            base: Box::new(Culture::KParty { k: 2 }),
            phi,
        };
        push("N(2-Party)", c, 100, 100);
    }
    for _ in 0..25 {
        let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
        push("(x,y)-2-Party", Culture::XyTwoParty { x, y }, 100, 100);
    }
    for _ in 0..25 {
        push("Party-List", Culture::UnevenPartyList, 100, 100);
    }
    for k in 2..=5 {
        for p in [0.1, 0.3, 0.5, 0.7, 0.9] {
            push("ID Mixture", Culture::IdMixture { k, p }, 100, 1000);
        }
    }
    for k in 2..=5 {
        for _ in 0..5 {
            push("IAM Mixture", Culture::IamMixture { k }, 100, 1000);
        }
    }
    for variant in 1..=5u8 {
        for _ in 0..10 {
            push("2D-Euclidean", Culture::Euclidean { variant }, 100, 1000);
        }
    }
    out
}

/// Distinct colors for up to sixteen groups, cycling beyond.
pub fn palette(i: usize) -> &'static str {
    const COLORS: [&str; 16] = [
        "#000000", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
        "#bcbd22", "#17becf", "#393b79", "#ad494a", "#637939", "#8c6d31", "#7b4173",
    ];
    COLORS[i % COLORS.len()]
}
