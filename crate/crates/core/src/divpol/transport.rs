//! Min-cost transportation by successive shortest paths.

use crate::error::{invalid, Result};

const EPS: f64 = 1e-15;

/// A solved transportation problem.
#[derive(Debug, Clone)]
pub struct TransportPlan {
    pub cost: f64,
    /// row-major `supply.len() x demand.len()`
    pub flow: Vec<f64>,
}

/// Minimum-cost flow shipping `supply[i]` out of every row and `demand[j]`
/// into every column, with unit costs `cost[i * cols + j]` (nonnegative).
///
/// Totals must match up to a relative 1e-9. With integral supplies and
/// demands every augmentation is integral, so the optimum is exact.
pub fn min_cost_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<TransportPlan> {
    let (rows, cols) = (supply.len(), demand.len());
    if cost.len() != rows * cols {
        return invalid(format!("cost matrix has {} entries, expected {rows}x{cols}", cost.len()));
    }
    if supply.iter().chain(demand).chain(cost).any(|x| !x.is_finite() || *x < 0.0) {
        return invalid("supplies, demands and costs must be finite and nonnegative");
    }
    let total_s: f64 = supply.iter().sum();
    let total_d: f64 = demand.iter().sum();
    if (total_s - total_d).abs() > 1e-9 * total_s.max(total_d).max(1.0) {
        return invalid(format!("supply {total_s} does not match demand {total_d}"));
    }
    let tol = EPS * total_s.max(1.0);

    let nodes = rows + cols;
    let mut left = supply.to_vec();
    let mut need = demand.to_vec();
    let mut flow = vec![0.0; rows * cols];
    let mut pi = vec![0.0f64; nodes];
    let mut dist = vec![f64::INFINITY; nodes];
    let mut pred = vec![usize::MAX; nodes];
    let mut done = vec![false; nodes];

    while need.iter().any(|&d| d > tol) {
        dist.fill(f64::INFINITY);
        pred.fill(usize::MAX);
        done.fill(false);
        // super source at potential 0 feeds every row with supply left
        for i in 0..rows {
            if left[i] > tol {
                dist[i] = (-pi[i]).max(0.0);
            }
        }
        loop {
            let mut u = usize::MAX;
            let mut best = f64::INFINITY;
            for v in 0..nodes {
                if !done[v] && dist[v] < best {
                    best = dist[v];
                    u = v;
                }
            }
            if u == usize::MAX {
                break;
            }
            done[u] = true;
            if u < rows {
                for j in 0..cols {
                    let v = rows + j;
                    let rc = (cost[u * cols + j] + pi[u] - pi[v]).max(0.0);
                    if best + rc < dist[v] {
                        dist[v] = best + rc;
                        pred[v] = u;
                    }
                }
            } else {
                let j = u - rows;
                for i in 0..rows {
                    if flow[i * cols + j] > tol {
                        let rc = (-cost[i * cols + j] + pi[u] - pi[i]).max(0.0);
                        if best + rc < dist[i] {
                            dist[i] = best + rc;
                            pred[i] = u;
                        }
                    }
                }
            }
        }
        let reach = dist.iter().copied().filter(|d| d.is_finite()).fold(0.0, f64::max);
        for v in 0..nodes {
            pi[v] += if dist[v].is_finite() { dist[v] } else { reach };
        }
        // true distance from the super source is the new potential
        let sink = (0..cols)
            .filter(|&j| need[j] > tol && dist[rows + j].is_finite())
            .min_by(|&a, &b| pi[rows + a].total_cmp(&pi[rows + b]).then(a.cmp(&b)));
        let Some(j) = sink else {
            let unmet: f64 = need.iter().sum();
            if unmet <= 1e-9 * total_s.max(1.0) {
                break;
            }
            return invalid("transport problem has no feasible augmenting path");
        };

        let mut amount = need[j];
        let mut v = rows + j;
        while pred[v] != usize::MAX {
            let u = pred[v];
            if u >= rows {
                amount = amount.min(flow[v * cols + (u - rows)]);
            }
            v = u;
        }
        amount = amount.min(left[v]);

        need[j] -= amount;
        left[v] -= amount;
        let mut v = rows + j;
        while pred[v] != usize::MAX {
            let u = pred[v];
            if u < rows {
                flow[u * cols + (v - rows)] += amount;
            } else {
                flow[v * cols + (u - rows)] -= amount;
            }
            v = u;
        }
    }
    let cost_total = flow.iter().zip(cost).map(|(f, c)| f * c).sum();
    Ok(TransportPlan {
        cost: cost_total,
        flow,
    })
}
