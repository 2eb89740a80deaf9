//! Exact dynamic-programming knapsack oracle and the profit-scaling
//! approximation scheme.
//!
//! The DP runs over achievable profit sums and stores, per profit, the
//! minimal weight reaching it. The approximation scheme scales profits by
//! `K = eps * v_max / n` (clamped to at least 1, where it degenerates to the
//! exact DP) and solves the scaled problem exactly, which guarantees a value
//! of at least `(1 - eps) * OPT`.

use crate::instance::Instance;
use crate::packing::Packing;
use crate::{Error, Result};

/// Cap on `rows * (total_profit + 1)` DP cells before the oracle refuses.
pub const DEFAULT_DP_CELL_CAP: u128 = 500_000_000;

/// Outcome of [`fptas_solve`].
#[derive(Clone, Debug, PartialEq)]
pub struct ApproxResult {
    pub packing: Packing,
    /// True (unscaled) profit of the packing.
    pub value: u64,
    pub weight: u64,
    pub epsilon_used: f64,
    /// Guaranteed fraction of the optimum, `1 - eps`.
    pub guarantee: f64,
}

/// Bit matrix recording which DP improvements took an item; used to walk the
/// chosen packing back out of the table.
struct KeepGrid {
    words: Vec<u64>,
    stride: usize,
}

impl KeepGrid {
    fn new(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(64);
        KeepGrid { words: vec![0u64; rows * stride], stride }
    }

    fn set(&mut self, row: usize, col: usize) {
        self.words[row * self.stride + col / 64] |= 1u64 << (col % 64);
    }

    fn get(&self, row: usize, col: usize) -> bool {
        self.words[row * self.stride + col / 64] >> (col % 64) & 1 == 1
    }
}

/// Min-weight-per-profit DP over the eligible items.
///
/// `profits` may be scaled; zero-profit entries are skipped (they can never
/// raise the objective). Ties prefer the lower weight and then the solution
/// not using the current item, which makes reconstruction deterministic.
fn dp_best_packing(
    n: usize,
    eligible: &[usize],
    weights: &[u64],
    profits: &[u64],
    capacity: u64,
    cell_cap: u128,
) -> Result<(u64, Packing)> {
    let total: u64 = eligible.iter().map(|&i| profits[i]).sum();
    let cols = total as u128 + 1;
    let cells = eligible.len() as u128 * cols;
    if cells > cell_cap || cols > 50_000_000 {
        return Err(Error::OracleTooLarge { cells, cap: cell_cap });
    }

    const INF: u64 = u64::MAX;
    let mut dp = vec![INF; total as usize + 1];
    dp[0] = 0;
    let mut keep = KeepGrid::new(eligible.len(), total as usize + 1);
    let mut reachable: usize = 0; // highest profit with a finite entry so far
    for (row, &i) in eligible.iter().enumerate() {
        let (w, v) = (weights[i], profits[i] as usize);
        if v == 0 {
            continue;
        }
        reachable = (reachable + v).min(total as usize);
        for p in (v..=reachable).rev() {
            let below = dp[p - v];
            if below == INF {
                continue;
            }
            let cand = below + w;
            if cand < dp[p] {
                dp[p] = cand;
                keep.set(row, p);
            }
        }
    }

    let best = (0..=total as usize)
        .rev()
        .find(|&p| dp[p] <= capacity)
        .expect("profit 0 is always achievable");

    let mut packing = Packing::zeros(n);
    let mut p = best;
    for (row, &i) in eligible.iter().enumerate().rev() {
        if keep.get(row, p) {
            packing.set(i, true);
            p -= profits[i] as usize;
        }
    }
    debug_assert_eq!(p, 0);
    Ok((best as u64, packing))
}

fn eligible_items(inst: &Instance, capacity: u64) -> Vec<usize> {
    // items heavier than the capacity can never be packed
    (0..inst.n()).filter(|&i| inst.weights()[i] <= capacity).collect()
}

/// Maximum-profit packing under the capacity, solved exactly.
///
/// Refuses with [`Error::OracleTooLarge`] when the profit table would exceed
/// [`DEFAULT_DP_CELL_CAP`] cells.
pub fn exact_optimum(inst: &Instance, capacity: u64) -> Result<(u64, Packing)> {
    let eligible = eligible_items(inst, capacity);
    dp_best_packing(
        inst.n(),
        &eligible,
        inst.weights(),
        inst.profits(),
        capacity,
        DEFAULT_DP_CELL_CAP,
    )
}

/// Profit-scaling approximation: feasible and within `(1 - eps)` of optimal.
pub fn fptas_solve(inst: &Instance, capacity: u64, eps: f64) -> Result<ApproxResult> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let eligible = eligible_items(inst, capacity);
    let result = |packing: Packing| ApproxResult {
        weight: inst.total_weight(&packing),
        value: inst.total_value(&packing),
        packing,
        epsilon_used: eps,
        guarantee: 1.0 - eps,
    };
    if eligible.is_empty() {
        return Ok(result(Packing::zeros(inst.n())));
    }

    let v_max = eligible.iter().map(|&i| inst.profits()[i]).max().unwrap();
    let k = eps * v_max as f64 / inst.n() as f64;
    let packing = if k <= 1.0 {
        // integer profits make K < 1 meaningless; unscaled DP is exact
        dp_best_packing(
            inst.n(),
            &eligible,
            inst.weights(),
            inst.profits(),
            capacity,
            DEFAULT_DP_CELL_CAP,
        )?
        .1
    } else {
        let scaled: Vec<u64> =
            inst.profits().iter().map(|&v| (v as f64 / k).floor() as u64).collect();
        dp_best_packing(
            inst.n(),
            &eligible,
            inst.weights(),
            &scaled,
            capacity,
            DEFAULT_DP_CELL_CAP,
        )?
        .1
    };
    Ok(result(packing))
}
