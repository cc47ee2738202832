//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with `cargo test --test acceptance`.

use approval_dap::agreement::{cntr_agr, cntr_agr_closed_form, pair_agr, pair_agr_naive, pcc_agr, pccplus_agr};
use approval_dap::divpol::{ham_single_to_unc, out_div, out_div_exact, OuterDiversityConfig};
use approval_dap::experiments::{complementarity, kendall_tau_b, kendall_tau_b_naive, pairs_among_most_distant, resampling_experiment};
use approval_dap::generators::{gen_k_party, gen_triangle};
use approval_dap::io::parse_pabulib_bytes;
use approval_dap::{Ballot, Election, Error, Exact, IndexKind};
use approval_dap_cli::commands::{compute_map, compute_table, MapOutcome};
use approval_dap_cli::{load_manifest, RunManifest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_election(rng: &mut impl Rng, max_m: usize, max_n: usize) -> Election {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let p: f64 = rng.gen();
    let ballots = (0..n)
        .map(|_| Ballot::from_bits(&(0..m).map(|_| rng.gen_bool(p)).collect::<Vec<_>>()))
        .collect();
    Election::new(m, ballots).unwrap()
}

/// An election whose approvals total exactly one or all-but-one cell.
fn edge_saturation(rng: &mut impl Rng, max_m: usize, max_n: usize) -> Election {
    let m = rng.gen_range(1..=max_m);
    let n = rng.gen_range(1..=max_n);
    let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..m));
    let full = rng.gen_bool(0.5);
    let ballots = (0..n)
        .map(|v| {
            let mut b = if full { Ballot::ones(m) } else { Ballot::zeros(m) };
            if v == i {
                b.set(j, !full);
            }
            b
        })
        .collect();
    Election::new(m, ballots).unwrap()
}

fn nondegenerate(e: &Election) -> bool {
    let t = e.total_approvals();
    t > 0 && t < e.num_candidates() * e.num_voters()
}

// ---------------------------------------------------------------- 1

const TABLE_KINDS: [IndexKind; 12] = [
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

/// Reference compass table: (label, deterministic, means, reported stds).
#[rustfmt::skip]
const REFERENCE_TABLE: [(&str, bool, [f64; 12], [f64; 12]); 14] = [
    ("1/3-ID", true, [1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00], [0.0; 12]),
    ("2-Party", true, [0.00, 0.00, 0.00, 0.00, 0.50, 0.50, 0.20, 0.25, 0.10, 1.00, 1.00, 1.00], [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.02, 0.00, 0.00, 0.00, 0.00]),
    ("N(2-Party,0.6)", false, [0.09, 0.08, 0.01, 0.02, 0.35, 0.10, 0.66, 0.82, 0.29, 0.25, 0.17, 0.24], [0.01, 0.01, 0.00, 0.00, 0.01, 0.01, 0.02, 0.01, 0.00, 0.10, 0.01, 0.01]),
    ("3-Party", true, [0.33, 0.00, 0.00, 0.00, 0.33, 0.33, 0.33, 0.31, 0.13, 0.33, 0.50, 0.63], [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.01, 0.00, 0.00, 0.00, 0.00]),
    ("4-Party", true, [0.50, 0.00, 0.00, 0.00, 0.25, 0.25, 0.47, 0.40, 0.15, 0.25, 0.33, 0.43], [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.04, 0.00, 0.00, 0.00, 0.00, 0.00]),
    ("(1/3,1/3)-2-Party", true, [0.33, 0.24, 0.10, 0.11, 0.56, 0.56, 0.15, 0.18, 0.09, 0.76, 0.89, 0.99], [0.0; 12]),
    ("Cyclic", true, [0.00, 0.00, 0.00, 0.00, 0.39, 0.25, 0.46, 0.57, 0.22, 0.50, 0.33, 0.58], [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.01, 0.00, 0.00, 0.00, 0.00]),
    ("Diagonal", true, [0.97, 0.00, 0.00, 0.00, 0.02, 0.02, 0.97, 0.97, 0.63, 0.02, 0.02, 0.01], [0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.01, 0.00, 0.00, 0.00]),
    ("Triangle", true, [0.50, 0.49, 0.33, 0.50, 0.51, 0.50, 0.41, 0.32, 0.18, 0.01, 0.14, 0.47], [0.0; 12]),
    ("N(Tri,0.6)", false, [0.21, 0.20, 0.06, 0.15, 0.33, 0.17, 0.89, 0.77, 0.26, 0.00, 0.05, 0.39], [0.01, 0.02, 0.00, 0.02, 0.01, 0.02, 0.01, 0.03, 0.00, 0.02, 0.00, 0.01]),
    ("1/2-ID/IC", false, [0.50, 0.49, 0.26, 0.25, 0.51, 0.30, 0.41, 0.50, 0.19, 0.07, 0.26, 0.45], [0.01, 0.01, 0.01, 0.01, 0.00, 0.00, 0.01, 0.00, 0.00, 0.01, 0.02, 0.01]),
    ("1/2-IC", false, [0.10, 0.10, 0.02, 0.02, 0.34, 0.07, 0.81, 0.91, 0.29, 0.07, 0.05, 0.18], [0.01, 0.01, 0.00, 0.00, 0.01, 0.00, 0.01, 0.00, 0.00, 0.01, 0.00, 0.00]),
    ("1/4-IC", false, [0.49, 0.00, 0.02, 0.02, 0.16, 0.07, 0.97, 0.90, 0.31, 0.01, 0.05, 0.16], [0.01, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.01, 0.00, 0.00]),
    ("Lin-IC", false, [0.08, 0.06, 0.01, 0.09, 0.31, 0.15, 0.96, 0.83, 0.27, 0.00, 0.04, 0.37], [0.01, 0.01, 0.00, 0.02, 0.01, 0.03, 0.01, 0.03, 0.00, 0.01, 0.00, 0.01]),
];

/// float slack so that boundary cells (e.g. a deviation of exactly 0.05)
/// are not decided by representation error
const SLACK: f64 = 1e-9;
const ROUNDING_TOL: f64 = 0.005;
const CLUSTER_TOL: f64 = 0.05;
const OUT_DIV_TOL: f64 = 0.05;
const STOCHASTIC_FLOOR: f64 = 0.03;

fn table_tolerance(deterministic: bool, col: usize, reported_std: f64) -> f64 {
    let kind = TABLE_KINDS[col];
    let loose = match kind {
        IndexKind::CntrDiv | IndexKind::PccDiv | IndexKind::CntrPol | IndexKind::PccPol => Some(CLUSTER_TOL),
        IndexKind::OutDiv => Some(OUT_DIV_TOL),
        _ => None,
    };
    let base = if deterministic { ROUNDING_TOL } else { (3.0 * reported_std).max(STOCHASTIC_FLOOR) };
    loose.map_or(base, |l| base.max(l)) + SLACK
}

fn criterion_1() -> Outcome {
    let RunManifest::Table(t) = load_manifest(&repo_root().join("manifests/compass.json")).map_err(|e| e.to_string())? else {
        return Err("compass.json is not a table manifest".into());
    };
    if t.samples != 10 || t.elections.iter().any(|s| s.m != 60 || s.n != 60) {
        return Err("compass manifest must use 60x60 elections and 10 samples".into());
    }
    let start = Instant::now();
    let table = compute_table(&t).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (row, (label, det, means, stds)) in REFERENCE_TABLE.iter().enumerate() {
        if table.labels[row] != *label {
            return Err(format!("row {row} is `{}`, expected `{label}`", table.labels[row]));
        }
        for (col, &kind) in TABLE_KINDS.iter().enumerate() {
            let (got, _) = table.cell(row, kind).ok_or("missing column")?;
            let tol = table_tolerance(*det, col, stds[col]);
            let dev = (got - means[col]).abs();
            worst = worst.max(dev / tol);
            if dev > tol {
                failures.push(format!("{label}/{}: {got:.4} vs {:.2} (tol {:.3})", kind.name(), means[col], tol - SLACK));
            }
        }
    }
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("runtime {elapsed:.1?} exceeds 5 minutes"));
    }
    check(
        failures.is_empty(),
        format!(
            "168 cells, worst deviation {:.2} of tolerance, {elapsed:.1?}{}",
            worst,
            if failures.is_empty() { String::new() } else { format!("; {}", failures.join("; ")) }
        ),
    )
}

// ---------------------------------------------------------------- 2, 3

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut edge = 0;
    for i in 0..500 {
        let e = if i % 5 == 0 {
            edge += 1;
            edge_saturation(&mut rng, 30, 30)
        } else {
            random_election(&mut rng, 30, 30)
        };
        if !nondegenerate(&e) {
            continue;
        }
        let fast: f64 = pair_agr(&e);
        let naive: f64 = pair_agr_naive(&e).map_err(|x| x.to_string())?;
        let rel = (fast - naive).abs() / naive.abs().max(f64::MIN_POSITIVE);
        worst = worst.max(if fast == naive { 0.0 } else { rel });
        if rel > 1e-12 && (fast - naive).abs() > 1e-12 {
            return Err(format!("election {i}: {fast} vs {naive}"));
        }
        let a: Exact = pair_agr(&e);
        let b: Exact = pair_agr_naive(&e).map_err(|x| x.to_string())?;
        if a != b {
            return Err(format!("election {i}: exact {a} vs {b}"));
        }
    }
    Ok(format!("500 elections ({edge} at edge saturation), max rel diff {worst:.1e}, rationals equal"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    let mut worst = 0.0f64;
    while done < 500 {
        let e = random_election(&mut rng, 30, 30);
        if !nondegenerate(&e) {
            continue;
        }
        let a: Exact = cntr_agr(&e);
        let b: Exact = cntr_agr_closed_form(&e).map_err(|x| x.to_string())?;
        if a != b {
            return Err(format!("election {done}: {a} vs {b}"));
        }
        let (x, y): (f64, f64) = (cntr_agr(&e), cntr_agr_closed_form(&e).unwrap());
        worst = worst.max((x - y).abs());
        done += 1;
    }
    Ok(format!("500 elections, rationals equal, max f64 diff {worst:.1e}"))
}

// ---------------------------------------------------------------- 4, 5

fn criterion_4() -> Outcome {
    let mut lines = Vec::new();
    for size in [60, 120] {
        for k in 2..=6 {
            let e = gen_k_party(size, size, k).map_err(|x| x.to_string())?;
            let pcc: f64 = pcc_agr(&e);
            let plus: f64 = pccplus_agr(&e);
            if pcc.abs() > 1e-12 || (plus - 1.0 / k as f64).abs() > 1e-12 {
                return Err(format!("{k}-Party {size}x{size}: pcc {pcc}, pcc+ {plus}"));
            }
        }
        lines.push(format!("{size}x{size}"));
    }
    Ok(format!("k = 2..6 at {}", lines.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let m = rng.gen_range(3..=30);
        let n = rng.gen_range(2..=30);
        let len = m / 3;
        let ballots = (0..n)
            .map(|_| Ballot::from_approved(m, rand::seq::index::sample(&mut rng, m, len).into_iter()).unwrap())
            .collect();
        let e = Election::new(m, ballots).unwrap();
        let (a, b): (f64, f64) = (pcc_agr(&e), pair_agr(&e));
        worst = worst.max((a - b).abs());
        if (a - b).abs() > 1e-10 {
            return Err(format!("election {i} ({m}x{n}): pcc {a} vs pair {b}"));
        }
    }
    let tri = gen_triangle(60).map_err(|x| x.to_string())?;
    let (pcc, pair): (f64, f64) = (pcc_agr(&tri), pair_agr(&tri));
    let r2 = |x: f64| (x * 100.0).round() / 100.0;
    check(
        r2(pcc) == 0.50 && r2(pair) == 0.33,
        format!("200 fixed-length elections, max diff {worst:.1e}; Triangle pcc {pcc:.4}, pair {pair:.4}"),
    )
}

// ---------------------------------------------------------------- 6, 7

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for i in 0..2000 {
        let e = if i % 10 == 0 { edge_saturation(&mut rng, 20, 20) } else { random_election(&mut rng, 20, 20) };
        let pcc: f64 = pcc_agr(&e);
        let cfg = OuterDiversityConfig::new(5, i).unwrap();
        let od = out_div(&e, &cfg).map_err(|x| x.to_string())?;
        for v in [pcc, od] {
            lo = lo.min(v);
            hi = hi.max(v);
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("election {i}: pcc_agr {pcc}, out_div {od}"));
            }
        }
    }
    Ok(format!("2000 elections, observed range [{lo:.3}, {hi:.3}]"))
}

/// Optimal transport cost from the votes (uniform over voters) to the
/// p-weighted universe, by brute force over integer dual potentials:
/// max Σ s_i u_i + Σ_w μ(w) min_i (ham(v_i, w) − u_i), with u_0 = 0.
fn dual_enumeration_cost(e: &Election, p: f64) -> f64 {
    let m = e.num_candidates();
    let mut groups: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    for b in e.ballots() {
        *groups.entry(b.to_bits()).or_default() += 1;
    }
    let votes: Vec<(Vec<bool>, f64)> = groups
        .into_iter()
        .map(|(b, c)| (b, c as f64 / e.num_voters() as f64))
        .collect();
    let universe: Vec<(Vec<bool>, f64)> = (0u32..1 << m)
        .map(|mask| {
            let bits: Vec<bool> = (0..m).map(|j| mask >> j & 1 == 1).collect();
            let k = bits.iter().filter(|&&b| b).count() as i32;
            (bits, p.powi(k) * (1.0 - p).powi(m as i32 - k))
        })
        .collect();
    let ham = |a: &[bool], b: &[bool]| a.iter().zip(b).filter(|(x, y)| x != y).count() as i64;
    let bound = m as i64 + 1;
    let width = (2 * bound + 1) as usize;
    let d = votes.len();
    let mut best = f64::MIN;
    for code in 0..width.pow(d as u32 - 1) {
        // u_0 = 0; u_1.. are the base-`width` digits of `code`, shifted
        let mut u = vec![0i64; d];
        let mut c = code;
        for ui in u.iter_mut().skip(1) {
            *ui = (c % width) as i64 - bound;
            c /= width;
        }
        let mut value: f64 = votes.iter().zip(&u).map(|((_, s), &ui)| s * ui as f64).sum();
        for (w, mu) in &universe {
            let v = votes.iter().zip(&u).map(|((b, _), &ui)| ham(b, w) - ui).min().unwrap();
            value += mu * v as f64;
        }
        best = best.max(value);
    }
    best
}

fn all_elections(m: usize, n: usize) -> Vec<Election> {
    let mut out = Vec::new();
    let total = 1usize << m;
    // nondecreasing tuples of ballots: every multiset once
    fn rec(start: usize, left: usize, total: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Election>) {
        if left == 0 {
            let ballots = cur.iter().map(|&mask| Ballot::from_approved(m, (0..m).filter(|j| mask >> j & 1 == 1)).unwrap()).collect();
            out.push(Election::new(m, ballots).unwrap());
            return;
        }
        for b in start..total {
            cur.push(b);
            rec(b, left - 1, total, m, cur, out);
            cur.pop();
        }
    }
    rec(0, n, total, m, &mut Vec::new(), &mut out);
    out
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=10usize {
        for pi in 0..=10 {
            let p = pi as f64 / 10.0;
            for k in 0..=m {
                let q = k as f64 / m as f64;
                let closed = ham_single_to_unc(p, q);
                // u approves the first k candidates
                let mut brute = 0.0;
                for mask in 0u32..1 << m {
                    let ones = mask.count_ones() as i32;
                    let weight = p.powi(ones) * (1.0 - p).powi(m as i32 - ones);
                    let low = (mask & ((1u32 << k) - 1)).count_ones() as usize;
                    let d = (k - low) + (ones as usize - low);
                    brute += weight * d as f64;
                }
                brute /= m as f64;
                worst = worst.max((closed - brute).abs());
                if (closed - brute).abs() > 1e-12 {
                    return Err(format!("m={m} p={p} q={q}: {closed} vs {brute}"));
                }
            }
        }
    }
    let mut count = 0;
    let mut worst_od = 0.0f64;
    for m in 1..=4 {
        for n in 1..=3 {
            for e in all_elections(m, n) {
                let p = e.stats().satr;
                let oracle = if p <= 0.0 || p >= 1.0 {
                    0.0
                } else {
                    let est = dual_enumeration_cost(&e, p) / m as f64;
                    (1.0 - est / (2.0 * p * (1.0 - p))).clamp(0.0, 1.0)
                };
                let got = out_div_exact(&e).map_err(|x| x.to_string())?;
                worst_od = worst_od.max((got - oracle).abs());
                if (got - oracle).abs() > 1e-9 {
                    return Err(format!("{m}x{n} election {:?}: {got} vs {oracle}", e.ballots()));
                }
                count += 1;
            }
        }
    }
    Ok(format!(
        "single-vote distance max diff {worst:.1e} over m <= 10; out_div exact vs dual oracle on {count} elections, max diff {worst_od:.1e}"
    ))
}

// ---------------------------------------------------------------- 8

const SPREAD_MAX: f64 = 0.05;
const SPREAD_MIN_DEPENDENT: f64 = 0.15;

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for (kind, independent) in [
        (IndexKind::PairAgr, true),
        (IndexKind::PccAgr, true),
        (IndexKind::PccplusAgr, true),
        (IndexKind::AvAgr, false),
        (IndexKind::JaccAgr, false),
    ] {
        let r = resampling_experiment(kind, 60, 60, 10, 11).map_err(|x| x.to_string())?;
        let spread = r.column_spread().into_iter().fold(0.0f64, f64::max);
        let pass = if independent { spread <= SPREAD_MAX } else { spread >= SPREAD_MIN_DEPENDENT };
        ok &= pass;
        parts.push(format!("{} {spread:.3}{}", kind.name(), if pass { "" } else { " (!)" }));
    }
    let elapsed = start.elapsed();
    ok &= elapsed <= Duration::from_secs(600);
    check(ok, format!("max column spread: {}; {elapsed:.1?}", parts.join(", ")))
}

// ---------------------------------------------------------------- 9, 10

const DISTORTION_MAX: f64 = 1.05;
const COMPLEMENTARITY_MIN: f64 = 0.85;

fn load_map() -> Result<(MapOutcome, Duration), String> {
    let RunManifest::Map(m) = load_manifest(&repo_root().join("manifests/synthetic_map.json")).map_err(|e| e.to_string())? else {
        return Err("synthetic_map.json is not a map manifest".into());
    };
    let want = [
        ("Compass", 14),
        ("IC", 10),
        ("Lin-IC", 5),
        ("Resampling", 50),
        ("N(2-Party)", 25),
        ("(x,y)-2-Party", 25),
        ("Party-List", 25),
        ("ID Mixture", 20),
        ("IAM Mixture", 20),
        ("2D-Euclidean", 50),
    ];
    for (group, count) in want {
        let got = m.elections.iter().filter(|e| e.group.as_deref() == Some(group)).count();
        if got != count {
            return Err(format!("group {group} has {got} elections, expected {count}"));
        }
    }
    let start = Instant::now();
    let out = compute_map(&m).map_err(|e| e.to_string())?;
    Ok((out, start.elapsed()))
}

fn criterion_9(map: &Result<(MapOutcome, Duration), String>) -> Outcome {
    let (out, elapsed) = map.as_ref().map_err(Clone::clone)?;
    let find = |label: &str| {
        out.labels
            .iter()
            .zip(&out.groups)
            .position(|(l, g)| l == label && g == "Compass")
            .ok_or(format!("no compass election `{label}`"))
    };
    let extremes = [find("1/3-ID")?, find("1/2-IC")?, find("2-Party")?];
    let distant = pairs_among_most_distant(&out.result.distances, &extremes, 0.05).map_err(|x| x.to_string())?;
    let d = out.result.embedding.distortion;
    check(
        d <= DISTORTION_MAX && distant && *elapsed <= Duration::from_secs(1800),
        format!(
            "{} elections, distortion {d:.4}, extremes among top 5% pairs: {distant}, {elapsed:.1?}",
            out.labels.len()
        ),
    )
}

fn criterion_10(map: &Result<(MapOutcome, Duration), String>) -> Outcome {
    let x = [0.1, 0.7, 0.3, 0.9, 0.5];
    let same = complementarity(&x, &x, &x).map_err(|e| e.to_string())?;
    let y = [0.4, 0.1, 0.2, 0.05, 0.3];
    let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 1.5 - a - b).collect();
    let constant = complementarity(&x, &y, &z).map_err(|e| e.to_string())?;
    let (out, _) = map.as_ref().map_err(Clone::clone)?;
    let c = out.complementarity;
    check(
        same == 0.0 && constant == 1.0 && c > COMPLEMENTARITY_MIN,
        format!("cmpl(x,x,x) = {same}, constant sum = {constant}, pcc triple on corpus = {c:.4}"),
    )
}

// ---------------------------------------------------------------- 11, 12

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..50 {
        let len = rng.gen_range(2..=200);
        let levels = rng.gen_range(2..=20);
        let x: Vec<f64> = (0..len).map(|_| rng.gen_range(0..levels) as f64 / 4.0).collect();
        let y: Vec<f64> = (0..len).map(|_| rng.gen_range(0..levels) as f64 / 4.0).collect();
        let (fast, naive) = (kendall_tau_b(&x, &y), kendall_tau_b_naive(&x, &y));
        if fast != naive {
            return Err(format!("column pair {i} (length {len}): {fast:?} vs {naive:?}"));
        }
    }
    Ok("50 column pairs with ties, bit-identical".into())
}

const FUZZ_BUDGET: Duration = Duration::from_secs(60);

fn mutate(rng: &mut impl Rng, seed: &[u8]) -> Vec<u8> {
    const TOKENS: [&[u8]; 10] = [b";", b",", b"\"", b"\n", b"\r\n", b"META\n", b"VOTES\n", b"PROJECTS\n", b"\xff", b"\xef\xbb\xbf"];
    let mut data = seed.to_vec();
    for _ in 0..rng.gen_range(1..=8) {
        let at = if data.is_empty() { 0 } else { rng.gen_range(0..=data.len()) };
        match rng.gen_range(0..5) {
            0 if !data.is_empty() => {
                let i = rng.gen_range(0..data.len());
                data[i] = rng.gen();
            }
            1 if at < data.len() => {
                let end = (at + rng.gen_range(1..16)).min(data.len());
                data.drain(at..end);
            }
            2 => {
                let t = TOKENS[rng.gen_range(0..TOKENS.len())];
                data.splice(at..at, t.iter().copied());
            }
            3 => data.truncate(at),
            _ if !data.is_empty() => {
                let from = rng.gen_range(0..data.len());
                let end = (from + rng.gen_range(1..40)).min(data.len());
                let chunk: Vec<u8> = data[from..end].to_vec();
                data.splice(at..at, chunk);
            }
            _ => {}
        }
    }
    data
}

fn criterion_12() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/pabulib");
    let expected: serde_json::Map<String, serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(dir.join("expected.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let mut corpus = Vec::new();
    let (mut good, mut bad) = (0, 0);
    for (file, want) in &expected {
        let bytes = std::fs::read(dir.join(file)).map_err(|e| e.to_string())?;
        let result = parse_pabulib_bytes(&bytes);
        match (want.get("line"), result) {
            (Some(line), Err(Error::Parse { line: got, .. })) if Some(got as u64) == line.as_u64() => bad += 1,
            (None, Ok(e)) if Some(e.num_voters() as u64) == want["n"].as_u64() && Some(e.num_candidates() as u64) == want["m"].as_u64() => {
                good += 1
            }
            (_, other) => return Err(format!("{file}: unexpected outcome {other:?}")),
        }
        corpus.push(bytes);
    }
    if good + bad < 5 || bad == 0 {
        return Err(format!("golden suite too small: {good} valid, {bad} malformed"));
    }

    let prev = std::panic::take_hook();
    std::panic::set_hook(Box::new(|_| {}));
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let start = Instant::now();
    let (mut runs, mut parsed) = (0u64, 0u64);
    let mut crash = None;
    while start.elapsed() < FUZZ_BUDGET {
        let pick = rng.gen_range(0..corpus.len());
        let input = mutate(&mut rng, &corpus[pick]);
        match catch_unwind(AssertUnwindSafe(|| parse_pabulib_bytes(&input))) {
            Ok(Ok(e)) => {
                parsed += 1;
                if e.num_candidates() == 0 || e.num_voters() == 0 {
                    crash = Some(format!("empty election accepted from {:?}", String::from_utf8_lossy(&input)));
                    break;
                }
            }
            Ok(Err(_)) => {}
            Err(_) => {
                crash = Some(format!("panic on {:?}", String::from_utf8_lossy(&input)));
                break;
            }
        }
        runs += 1;
    }
    std::panic::set_hook(prev);
    match crash {
        Some(c) => Err(c),
        None => Ok(format!("{good} valid + {bad} malformed golden files; {runs} fuzz inputs in {:.0?}, {parsed} parsed, no panic", start.elapsed())),
    }
}

fn main() {
    // libtest-style flags (e.g. --nocapture) are accepted and ignored
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |name: &str| filter.is_empty() || filter.iter().any(|f| name.contains(f.as_str()));

    let map = std::cell::OnceCell::new();
    let get_map = || map.get_or_init(load_map);

    type Check<'a> = (&'a str, &'a str, Box<dyn FnMut() -> Outcome + 'a>);
    let checks: Vec<Check> = vec![
        ("c01", "compass table reproduction", Box::new(criterion_1)),
        ("c02", "pair_agr fast = naive", Box::new(criterion_2)),
        ("c03", "cntr_agr = closed form", Box::new(criterion_3)),
        ("c04", "k-Party pcc exactness", Box::new(criterion_4)),
        ("c05", "pcc = pair on fixed-length ballots", Box::new(criterion_5)),
        ("c06", "pcc_agr and out_div ranges", Box::new(criterion_6)),
        ("c07", "single-vote distance and exact out_div oracles", Box::new(criterion_7)),
        ("c08", "resampling saturation independence", Box::new(criterion_8)),
        ("c09", "map distortion and extremes", Box::new(|| criterion_9(get_map()))),
        ("c10", "complementarity", Box::new(|| criterion_10(get_map()))),
        ("c11", "Kendall tau-b vs brute force", Box::new(criterion_11)),
        ("c12", "Pabulib golden files and fuzzing", Box::new(criterion_12)),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (id, name, mut f) in checks {
        if !wanted(id) && !wanted(name) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(&mut f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {id} {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {id} {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {failed} failed, total {:.1}s", total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
