//! Complementarity and correlation coefficients between index columns.

use crate::error::{invalid, Result};

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Population standard deviation.
pub fn population_std(x: &[f64]) -> f64 {
    let mu = mean(x);
    (x.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / x.len() as f64).sqrt()
}

/// 1 − std(x + y + z) / (std(x) + std(y) + std(z)).
///
/// The value lies in [0, 1] since std is subadditive; rounding residue
/// within 64 ulp of either end is snapped to it.
pub fn complementarity(x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
    let n = x.len();
    if y.len() != n || z.len() != n {
        return invalid("complementarity needs equal-length columns");
    }
    if n < 2 {
        return invalid("complementarity needs at least two values");
    }
    let spread = population_std(x) + population_std(y) + population_std(z);
    if spread == 0.0 {
        return invalid("complementarity of three constant columns is 0/0");
    }
    let sum: Vec<f64> = (0..n).map(|i| x[i] + y[i] + z[i]).collect();
    let ratio = population_std(&sum) / spread;
    let snap = 64.0 * f64::EPSILON;
    Ok(if ratio >= 1.0 - snap {
        0.0
    } else if ratio <= snap {
        1.0
    } else {
        1.0 - ratio
    })
}

/// Pearson correlation; `None` when either column is constant.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Counts pairs tied within runs of equal keys in a sorted slice.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0u64;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Merge sort returning the number of swaps (discordant inversions).
fn sort_count_swaps(v: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mut right = v.split_off(n / 2);
    let mut swaps = sort_count_swaps(v) + sort_count_swaps(&mut right);
    let left = std::mem::take(v);
    v.reserve(n);
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if right[j] < left[i] {
            v.push(right[j]);
            swaps += (left.len() - i) as u64;
            j += 1;
        } else {
            v.push(left[i]);
            i += 1;
        }
    }
    v.extend_from_slice(&left[i..]);
    v.extend_from_slice(&right[j..]);
    swaps
}

/// Kendall's tau-b in O(n log n) (Knight's algorithm). `None` when either
/// column is constant or the lengths differ.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if y.len() != n || n < 2 || x.iter().chain(y).any(|v| v.is_nan()) {
        return None;
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let n1 = tied_pairs(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let n3 = tied_pairs(&pairs);
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let swaps = sort_count_swaps(&mut ys);
    let n2 = tied_pairs(&ys);
    if n1 == n0 || n2 == n0 {
        return None;
    }
    // concordant − discordant = n0 − n1 − n2 + n3 − 2·swaps
    let s = n0 as i128 - n1 as i128 - n2 as i128 + n3 as i128 - 2 * swaps as i128;
    let denom = (((n0 - n1) as f64) * ((n0 - n2) as f64)).sqrt();
    Some(s as f64 / denom)
}

/// Kendall's tau-b by enumerating all pairs; the reference for
/// [`kendall_tau_b`].
pub fn kendall_tau_b_naive(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if y.len() != n || n < 2 {
        return None;
    }
    let (mut s, mut tx, mut ty, mut all) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            all += 1;
            let dx = x[i].partial_cmp(&x[j])? as i64;
            let dy = y[i].partial_cmp(&y[j])? as i64;
            s += dx * dy;
            if dx == 0 {
                tx += 1;
            }
            if dy == 0 {
                ty += 1;
            }
        }
    }
    if tx == all || ty == all {
        return None;
    }
    Some(s as f64 / (((all - tx) as f64) * ((all - ty) as f64)).sqrt())
}

/// Pairwise (Pearson, Kendall tau-b) matrices over the columns of `table`
/// (rows are elections). Undefined coefficients are `None`.
pub fn correlations(table: &[Vec<f64>]) -> Result<(Vec<Vec<Option<f64>>>, Vec<Vec<Option<f64>>>)> {
    if table.len() < 2 {
        return invalid("correlations need at least two elections");
    }
    let k = table[0].len();
    if table.iter().any(|r| r.len() != k) {
        return invalid("ragged index table");
    }
    let cols: Vec<Vec<f64>> = (0..k).map(|j| table.iter().map(|r| r[j]).collect()).collect();
    let mut rho = vec![vec![None; k]; k];
    let mut tau = vec![vec![None; k]; k];
    for a in 0..k {
        for b in a..k {
            rho[a][b] = pearson(&cols[a], &cols[b]);
            rho[b][a] = rho[a][b];
            tau[a][b] = kendall_tau_b(&cols[a], &cols[b]);
            tau[b][a] = tau[a][b];
        }
    }
    Ok((rho, tau))
}
