//! Rank-sum comparisons between operator result samples.
//!
//! [`wmw_test`] is one-sided (alternative: the first sample is
//! stochastically greater). Mid-ranks handle ties. Up to a combined size of
//! 20 the p-value comes from the exact permutation distribution of the rank
//! sum conditional on the observed (possibly tied) pooled values; beyond
//! that a normal approximation with tie-corrected variance and continuity
//! correction is used. [`holm_adjust`] applies the step-down multiple-testing
//! correction.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Error, Result};

/// Exact permutation p-values up to this pooled sample size.
pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AGreater,
    BGreater,
    None,
}

impl Direction {
    pub fn name(&self) -> &'static str {
        match self {
            Direction::AGreater => "a_greater",
            Direction::BGreater => "b_greater",
            Direction::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Correction {
    Holm,
}

/// One pairwise comparison after correction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairTest {
    pub algo_a: String,
    pub algo_b: String,
    pub p_value: f64,
    pub reject: bool,
    pub direction: Direction,
}

/// All pairwise comparisons of a group of samples.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TestReport {
    pub pairs: Vec<PairTest>,
    pub alpha: f64,
    pub correction: Correction,
}

/// Mid-ranks of the pooled samples, doubled so that ties stay integral.
fn doubled_midranks(a: &[f64], b: &[f64]) -> (Vec<u64>, u64) {
    let mut pooled: Vec<(f64, bool)> = a
        .iter()
        .map(|&v| (v, true))
        .chain(b.iter().map(|&v| (v, false)))
        .collect();
    pooled.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("samples must not contain NaN"));

    let n = pooled.len();
    let mut doubled = vec![0u64; n];
    let mut rank_sum_a = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // mid-rank of positions i..j (1-based) is (i + j + 1) / 2
        let dr = (i + j + 1) as u64; // doubled
        for k in i..j {
            doubled[k] = dr;
            if pooled[k].1 {
                rank_sum_a += dr;
            }
        }
        i = j;
    }
    (doubled, rank_sum_a)
}

/// Exact tail probability `P(rank sum of a random |a|-subset >= observed)`
/// over all subsets of the pooled doubled ranks.
fn exact_tail(doubled: &[u64], n_a: usize, observed: u64) -> f64 {
    let total: u64 = doubled.iter().sum();
    // ways[k][s] = number of k-subsets with doubled-rank sum s
    let mut ways = vec![vec![0u64; total as usize + 1]; n_a + 1];
    ways[0][0] = 1;
    for &dr in doubled {
        for k in (1..=n_a).rev() {
            for s in (dr..=total).rev() {
                let add = ways[k - 1][(s - dr) as usize];
                if add > 0 {
                    ways[k][s as usize] += add;
                }
            }
        }
    }
    let favorable: u64 = ways[n_a][observed as usize..].iter().sum();
    let all: u64 = ways[n_a].iter().sum();
    favorable as f64 / all as f64
}

/// One-sided rank-sum p-value for "a is stochastically greater than b".
pub fn wmw_test(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (n_a, n_b) = (a.len(), b.len());
    let n = n_a + n_b;
    let (doubled, rank_sum_a2) = doubled_midranks(a, b);

    if n <= EXACT_LIMIT {
        return Ok(exact_tail(&doubled, n_a, rank_sum_a2));
    }

    // normal approximation; ranks here are the usual (not doubled) ones
    let r_a = rank_sum_a2 as f64 / 2.0;
    let mean = n_a as f64 * (n + 1) as f64 / 2.0;
    // tie correction: subtract sum(t^3 - t) over tie groups
    let mut tie_sum = 0.0;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && doubled[j] == doubled[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_sum += t * t * t - t;
        i = j;
    }
    let nf = n as f64;
    let var = (n_a as f64 * n_b as f64 / 12.0)
        * ((nf + 1.0) - tie_sum / (nf * (nf - 1.0)));
    if var <= 0.0 {
        // every pooled value tied: the statistic is constant
        return Ok(1.0);
    }
    let z = (r_a - mean - 0.5) / var.sqrt();
    Ok(Normal::standard().sf(z))
}

/// Step-down rejection flags at level `alpha`, in the input order.
///
/// Sorted ascending, `p_(k)` is rejected while `p_(k) <= alpha / (m - k)`
/// (0-based); the first failure stops everything after it.
pub fn holm_adjust(p_values: &[f64], alpha: f64) -> Vec<bool> {
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p_values[i].partial_cmp(&p_values[j]).expect("NaN p-value"));
    let mut reject = vec![false; m];
    for (k, &idx) in order.iter().enumerate() {
        if p_values[idx] <= alpha / (m - k) as f64 {
            reject[idx] = true;
        } else {
            break;
        }
    }
    reject
}

/// All pairwise one-sided comparisons among named samples, Holm-corrected
/// jointly. For each pair the better-supported direction is kept; the
/// direction is reported only for rejected pairs.
pub fn pairwise_compare(groups: &[(String, Vec<f64>)], alpha: f64) -> Result<TestReport> {
    let mut raw: Vec<(usize, usize, f64, Direction)> = Vec::new();
    for i in 0..groups.len() {
        for j in (i + 1)..groups.len() {
            let p_ab = wmw_test(&groups[i].1, &groups[j].1)?;
            let p_ba = wmw_test(&groups[j].1, &groups[i].1)?;
            let (p, dir) = if p_ab < p_ba {
                (p_ab, Direction::AGreater)
            } else if p_ba < p_ab {
                (p_ba, Direction::BGreater)
            } else {
                (p_ab, Direction::None)
            };
            raw.push((i, j, p, dir));
        }
    }
    let rejects = holm_adjust(&raw.iter().map(|r| r.2).collect::<Vec<_>>(), alpha);
    let pairs = raw
        .into_iter()
        .zip(rejects)
        .map(|((i, j, p, dir), reject)| PairTest {
            algo_a: groups[i].0.clone(),
            algo_b: groups[j].0.clone(),
            p_value: p,
            reject,
            direction: if reject { dir } else { Direction::None },
        })
        .collect();
    Ok(TestReport { pairs, alpha, correction: Correction::Holm })
}
