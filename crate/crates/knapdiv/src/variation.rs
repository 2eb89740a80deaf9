//! Variation operators: five mutations, the frequency-guided repair and the
//! intersection crossover.
//!
//! Operators never modify their input; each returns a fresh packing of the
//! same length. The biased operators consult the population's item
//! frequencies `h(i)` to prefer activating rare items and deactivating
//! common ones.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::instance::Instance;
use crate::packing::Packing;
use crate::{Error, Result};

pub const DEFAULT_HTBF_BETA: f64 = 1.5;

/// Mutation operator selection. Canonical names are the CLI contract:
/// `bf`, `pbf`, `htbf`, `edo-bbf1`, `edo-bbf2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum MutationOp {
    /// Standard bit-flip: each bit independently with probability `1/n`.
    Bf,
    /// Poisson bit-flip: flip `min(1 + Pois(1), n)` distinct positions.
    Pbf,
    /// Heavy-tailed bit-flip: power-law rate `theta/n`, exponent `beta > 1`.
    Htbf { beta: f64 },
    /// Frequency-biased asymmetric flips, strongest early in a run.
    EdoBbf1,
    /// Balanced flips: independent `1 + Pois(1)` budgets for the zero- and
    /// one-bit classes.
    EdoBbf2,
}

impl MutationOp {
    pub fn from_name(name: &str, beta: f64) -> Result<Self> {
        match name {
            "bf" => Ok(MutationOp::Bf),
            "pbf" => Ok(MutationOp::Pbf),
            "htbf" => {
                if beta <= 1.0 {
                    return Err(Error::InvalidParameter(format!(
                        "htbf requires beta > 1, got {beta}"
                    )));
                }
                Ok(MutationOp::Htbf { beta })
            }
            "edo-bbf1" => Ok(MutationOp::EdoBbf1),
            "edo-bbf2" => Ok(MutationOp::EdoBbf2),
            other => Err(Error::InvalidParameter(format!(
                "unknown operator {other:?} (expected bf|pbf|htbf|edo-bbf1|edo-bbf2)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MutationOp::Bf => "bf",
            MutationOp::Pbf => "pbf",
            MutationOp::Htbf { .. } => "htbf",
            MutationOp::EdoBbf1 => "edo-bbf1",
            MutationOp::EdoBbf2 => "edo-bbf2",
        }
    }

    /// Applies the operator. `freq` and `mu` describe the current population
    /// and are only consulted by `edo-bbf1`.
    pub fn apply<R: Rng>(
        &self,
        x: &Packing,
        freq: &[u32],
        mu: usize,
        rng: &mut R,
    ) -> Packing {
        match *self {
            MutationOp::Bf => mutate_bf(x, rng),
            MutationOp::Pbf => mutate_pbf(x, rng),
            MutationOp::Htbf { beta } => mutate_htbf(x, beta, rng),
            MutationOp::EdoBbf1 => mutate_bbf1(x, freq, mu, rng),
            MutationOp::EdoBbf2 => mutate_bbf2(x, rng),
        }
    }
}

/// Exact Poisson(1) sample by inversion of a single uniform draw.
pub fn poisson_one<R: Rng>(rng: &mut R) -> u64 {
    let u: f64 = rng.gen();
    let mut k = 0u64;
    let mut p = (-1.0f64).exp();
    let mut cdf = p;
    // the tail beyond k = 40 carries less mass than one ulp
    while u >= cdf && k < 40 {
        k += 1;
        p /= k as f64;
        cdf += p;
    }
    k
}

/// Power-law sample over `1..=half_n`: `Prob(theta) = theta^-beta / C`.
pub fn sample_power_law<R: Rng>(half_n: usize, beta: f64, rng: &mut R) -> usize {
    assert!(half_n >= 1, "support must be nonempty");
    assert!(beta > 1.0, "beta must exceed 1");
    let total: f64 = (1..=half_n).map(|i| (i as f64).powf(-beta)).sum();
    let mut u = rng.gen::<f64>() * total;
    for theta in 1..half_n {
        let w = (theta as f64).powf(-beta);
        if u < w {
            return theta;
        }
        u -= w;
    }
    half_n
}

fn flip_with_prob<R: Rng>(x: &Packing, p: f64, rng: &mut R) -> Packing {
    let mut out = x.clone();
    for i in 0..out.len() {
        if rng.gen::<f64>() < p {
            out.flip(i);
        }
    }
    out
}

/// Standard bit-flip with rate `1/n`.
pub fn mutate_bf<R: Rng>(x: &Packing, rng: &mut R) -> Packing {
    flip_with_prob(x, 1.0 / x.len() as f64, rng)
}

/// Flips `min(1 + Pois(1), n)` distinct uniformly chosen positions.
pub fn mutate_pbf<R: Rng>(x: &Packing, rng: &mut R) -> Packing {
    let n = x.len();
    let k = ((1 + poisson_one(rng)) as usize).min(n);
    let mut out = x.clone();
    for i in index::sample(rng, n, k) {
        out.flip(i);
    }
    out
}

/// Heavy-tailed bit-flip: rate `theta/n` with power-law `theta`.
pub fn mutate_htbf<R: Rng>(x: &Packing, beta: f64, rng: &mut R) -> Packing {
    let theta = sample_power_law((x.len() / 2).max(1), beta, rng);
    flip_with_prob(x, theta as f64 / x.len() as f64, rng)
}

/// Per-bit flip probability of `edo-bbf1`; the uncovered cases get 0 and the
/// result is clamped to 1 (the raw formula exceeds 1 once `mu > 2n`).
pub(crate) fn bbf1_flip_prob(bit: bool, h: u32, mu: usize, n: usize) -> f64 {
    let (h, mu) = (u64::from(h), mu as u64);
    let raw = if !bit && 2 * h <= mu {
        (mu - h) as f64 / (2 * n) as f64
    } else if bit && 2 * h > mu {
        h as f64 / (2 * n) as f64
    } else {
        0.0
    };
    raw.min(1.0)
}

/// Asymmetric frequency-biased flips: activate rare items, drop common ones.
pub fn mutate_bbf1<R: Rng>(x: &Packing, freq: &[u32], mu: usize, rng: &mut R) -> Packing {
    assert_eq!(x.len(), freq.len(), "frequency vector length mismatch");
    let n = x.len();
    let mut out = x.clone();
    for (i, (&h, &bit)) in freq.iter().zip(x.bits()).enumerate() {
        let p = bbf1_flip_prob(bit, h, mu, n);
        if p > 0.0 && rng.gen::<f64>() < p {
            out.flip(i);
        }
    }
    out
}

/// Balanced flips: `min(k_a, |X0|)` inactive and `min(k_b, |X1|)` active
/// positions, with independent `1 + Pois(1)` budgets drawn in that order.
pub fn mutate_bbf2<R: Rng>(x: &Packing, rng: &mut R) -> Packing {
    let zeros: Vec<usize> = x.positions(false).collect();
    let ones: Vec<usize> = x.positions(true).collect();
    let k_a = (1 + poisson_one(rng)) as usize;
    let k_b = (1 + poisson_one(rng)) as usize;
    let mut out = x.clone();
    if !zeros.is_empty() {
        for idx in index::sample(rng, zeros.len(), k_a.min(zeros.len())) {
            out.flip(zeros[idx]);
        }
    }
    if !ones.is_empty() {
        for idx in index::sample(rng, ones.len(), k_b.min(ones.len())) {
            out.flip(ones[idx]);
        }
    }
    out
}

/// Counting sort of item indices by frequency, ties by ascending index.
/// Runs in `O(n + max_h)`; frequencies are bounded by the population size.
fn order_by_freq(
    items: impl Iterator<Item = usize>,
    freq: &[u32],
    descending: bool,
) -> Vec<usize> {
    let max_h = freq.iter().copied().max().unwrap_or(0) as usize;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_h + 1];
    for i in items {
        buckets[freq[i] as usize].push(i);
    }
    let mut out = Vec::new();
    if descending {
        for b in buckets.iter().rev() {
            out.extend_from_slice(b);
        }
    } else {
        for b in &buckets {
            out.extend_from_slice(b);
        }
    }
    out
}

/// Phase 2 of the repair: activate inactive items in increasing frequency
/// order until the value threshold is met or items run out. Shared with
/// crossover. Returns the reached value.
fn fill_to_quality(x: &mut Packing, inst: &Instance, v_min: u64, freq: &[u32]) -> u64 {
    let mut value = inst.total_value(x);
    if value >= v_min {
        return value;
    }
    for i in order_by_freq(x.positions(false).collect::<Vec<_>>().into_iter(), freq, false) {
        if value >= v_min {
            break;
        }
        x.set(i, true);
        value += inst.profits()[i];
    }
    value
}

/// Frequency-guided repair.
///
/// Phase 1 drops active items in decreasing frequency order until the
/// capacity holds; phase 2 adds inactive items in increasing frequency order
/// until the value threshold holds or no items remain. Phase 2 can push the
/// weight back over the capacity; the caller's acceptance check decides.
pub fn repair(
    x: &Packing,
    inst: &Instance,
    v_min: u64,
    capacity: u64,
    freq: &[u32],
) -> Packing {
    assert_eq!(x.len(), freq.len(), "frequency vector length mismatch");
    let mut out = x.clone();
    let mut weight = inst.total_weight(&out);
    if weight > capacity {
        for i in order_by_freq(out.positions(true).collect::<Vec<_>>().into_iter(), freq, true)
        {
            if weight <= capacity {
                break;
            }
            out.set(i, false);
            weight -= inst.weights()[i];
        }
    }
    fill_to_quality(&mut out, inst, v_min, freq);
    out
}

/// Intersection crossover: the child keeps the items common to both parents
/// (so its weight is at most either parent's) and is then topped up to the
/// value threshold by repair phase 2.
pub fn crossover(
    x1: &Packing,
    x2: &Packing,
    inst: &Instance,
    v_min: u64,
    freq: &[u32],
) -> Packing {
    let mut child = x1.and(x2);
    fill_to_quality(&mut child, inst, v_min, freq);
    child
}
