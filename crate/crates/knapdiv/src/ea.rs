//! The steady-state (mu+1) evolutionary loop for diversity optimization.
//!
//! A run seeds the population with `mu` copies of an approximate solution
//! computed at `eps/2`, sets the quality threshold
//! `v_min = ceil((1 - eps/2) * v(x'))`, and then repeatedly builds one
//! offspring (crossover with probability `p_c`, otherwise a copy of a random
//! parent), mutates it, optionally repairs it, and accepts it only if it
//! meets both the capacity and the threshold. When the population overflows
//! to `mu + 1`, the member whose removal leaves the highest entropy is
//! dropped. Removing the newcomer restores the previous population, so the
//! entropy trace never decreases.
//!
//! Chaining the two `(1 - eps/2)` factors keeps every accepted member within
//! `(1 - eps)` of the true optimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::path::Path;

use crate::fptas::fptas_solve;
use crate::instance::{GenSpec, Instance};
use crate::population::{entropy_term, Population};
use crate::variation::{crossover, repair, MutationOp};
use crate::{Error, Result};

/// Parameters of one run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EaConfig {
    pub mu: usize,
    pub epsilon: f64,
    pub crossover_prob: f64,
    pub mutation: MutationOp,
    pub repair: bool,
    /// Number of offspring constructions, accepted or not.
    pub budget: u64,
    pub seed: u64,
}

/// The acceptance region of a run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityBound {
    pub v_min: u64,
    pub capacity: u64,
    pub epsilon: f64,
    /// Exact optimum when an oracle result was attached.
    pub opt_reference: Option<u64>,
}

/// Everything a finished run leaves behind.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub final_population: Population,
    /// `entropy_trace[t]` is `H(P)` after iteration `t`; index 0 is the
    /// seeded all-copies population.
    pub entropy_trace: Vec<f64>,
    pub quality: QualityBound,
    /// Value of the seeding solution `x'`.
    pub fptas_value: u64,
    pub accepted: u64,
    pub config: EaConfig,
    pub instance: GenSpec,
}

impl RunRecord {
    pub fn final_entropy(&self) -> f64 {
        *self.entropy_trace.last().unwrap()
    }

    pub fn with_opt_reference(mut self, opt: u64) -> Self {
        self.quality.opt_reference = Some(opt);
        self
    }

    /// Iterations kept when serializing a trace of the given budget: all of
    /// them up to 10^4, otherwise 100 evenly spaced checkpoints plus
    /// iterations 0, `mu` and the final one. An explicit stride overrides
    /// the rule.
    pub fn trace_checkpoints(budget: u64, mu: usize, stride: Option<u64>) -> Vec<u64> {
        let mut keep: Vec<u64> = match stride {
            Some(s) => {
                let s = s.max(1);
                (0..=budget / s).map(|j| j * s).collect()
            }
            None if budget <= 10_000 => return (0..=budget).collect(),
            None => (1..=100u64)
                .map(|j| (j as u128 * budget as u128 / 100) as u64)
                .collect(),
        };
        keep.push(0);
        keep.push(mu as u64);
        keep.push(budget);
        keep.sort_unstable();
        keep.dedup();
        keep.retain(|&t| t <= budget);
        keep
    }

    pub fn to_json(&self, stride: Option<u64>) -> serde_json::Value {
        let points: Vec<serde_json::Value> =
            Self::trace_checkpoints(self.config.budget, self.config.mu, stride)
                .into_iter()
                .map(|t| json!([t, self.entropy_trace[t as usize]]))
                .collect();
        json!({
            "instance": self.instance,
            "config": self.config,
            "quality": self.quality,
            "fptas_value": self.fptas_value,
            "accepted": self.accepted,
            "final_entropy": self.final_entropy(),
            "entropy_trace": points,
            "final_population": self
                .final_population
                .members()
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>(),
        })
    }

    pub fn write_json_file<P: AsRef<Path>>(&self, path: P, stride: Option<u64>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_json(stride))?)?;
        Ok(())
    }
}

/// `ceil((1 - eps/2) * value)`, computed exactly.
///
/// `eps` is a binary float, so `eps/2 * value` is the dyadic rational
/// `m * value / 2^k`; the floor of that is integer arithmetic, and
/// `ceil(v - y) = v - floor(y)` for integral `v`.
pub fn min_quality(value: u64, eps: f64) -> u64 {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    value - floor_scaled_half(value, eps)
}

/// Exact `floor(value * eps / 2)` via the mantissa/exponent decomposition.
fn floor_scaled_half(value: u64, eps: f64) -> u64 {
    let bits = eps.to_bits();
    let exp_field = (bits >> 52 & 0x7FF) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if exp_field == 0 {
        (frac, -1074i64) // subnormal
    } else {
        (frac | 1u64 << 52, exp_field - 1023 - 52)
    };
    let shift = -(exp - 1); // extra -1 halves the product
    debug_assert!(shift > 0, "eps < 1 always shifts right");
    let prod = u128::from(value) * u128::from(mantissa);
    if shift >= 128 {
        0
    } else {
        (prod >> shift) as u64
    }
}

/// Index of the member whose removal maximizes the remaining entropy, ties
/// to the lowest index. Panics unless the population has at least two
/// members.
pub fn select_survivor(pop: &Population) -> usize {
    let m = pop.len();
    assert!(m >= 2, "survivor selection needs at least two members");
    let denom = (m - 1) as u32;
    // entropy terms for the population-after-removal, indexed by frequency
    let table: Vec<f64> = (0..=denom).map(|h| entropy_term(h, denom)).collect();
    let freq = pop.frequencies();
    let mut best = (0usize, f64::NEG_INFINITY);
    for k in 0..m {
        let h_k: f64 = freq
            .iter()
            .zip(pop.member(k).bits())
            .map(|(&h, &b)| table[(h - u32::from(b)) as usize])
            .sum();
        if h_k > best.1 {
            best = (k, h_k);
        }
    }
    best.0
}

fn validate(inst: &Instance, capacity: u64, cfg: &EaConfig) -> Result<()> {
    if capacity == 0 {
        return Err(Error::InvalidParameter("capacity must be positive".into()));
    }
    if cfg.mu == 0 {
        return Err(Error::InvalidParameter("mu must be >= 1".into()));
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {}",
            cfg.epsilon
        )));
    }
    if !(0.0..=1.0).contains(&cfg.crossover_prob) {
        return Err(Error::InvalidParameter(format!(
            "crossover probability must lie in [0, 1], got {}",
            cfg.crossover_prob
        )));
    }
    if cfg.crossover_prob > 0.0 && cfg.mu < 2 {
        return Err(Error::InvalidParameter(
            "crossover needs two distinct parents, so mu >= 2".into(),
        ));
    }
    if cfg.budget == 0 {
        return Err(Error::InvalidParameter("budget must be >= 1".into()));
    }
    if let MutationOp::Htbf { beta } = cfg.mutation {
        if beta <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "htbf requires beta > 1, got {beta}"
            )));
        }
        if inst.n() < 2 {
            return Err(Error::InvalidParameter(
                "htbf needs at least two items".into(),
            ));
        }
    }
    Ok(())
}

/// Runs the full loop. Identical inputs give identical records.
pub fn run(inst: &Instance, capacity: u64, cfg: &EaConfig) -> Result<RunRecord> {
    validate(inst, capacity, cfg)?;

    let seeded = fptas_solve(inst, capacity, cfg.epsilon / 2.0)?;
    let v_min = min_quality(seeded.value, cfg.epsilon);
    let mut pop = Population::uniform(&seeded.packing, cfg.mu);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut trace = Vec::with_capacity(cfg.budget as usize + 1);
    trace.push(pop.entropy());
    let mut accepted = 0u64;

    for _ in 0..cfg.budget {
        let coin: f64 = rng.gen();
        let mut child = if coin < cfg.crossover_prob {
            // two distinct parents, uniform without replacement
            let first = rng.gen_range(0..cfg.mu);
            let mut second = rng.gen_range(0..cfg.mu - 1);
            if second >= first {
                second += 1;
            }
            crossover(
                pop.member(first),
                pop.member(second),
                inst,
                v_min,
                pop.frequencies(),
            )
        } else {
            pop.member(rng.gen_range(0..cfg.mu)).clone()
        };

        child = cfg.mutation.apply(&child, pop.frequencies(), cfg.mu, &mut rng);
        if cfg.repair {
            child = repair(&child, inst, v_min, capacity, pop.frequencies());
        }

        if inst.total_weight(&child) <= capacity && inst.total_value(&child) >= v_min {
            accepted += 1;
            pop.push(child);
            let gone = select_survivor(&pop);
            pop.remove(gone);
        }
        trace.push(pop.entropy());
    }

    Ok(RunRecord {
        final_population: pop,
        entropy_trace: trace,
        quality: QualityBound {
            v_min,
            capacity,
            epsilon: cfg.epsilon,
            opt_reference: None,
        },
        fptas_value: seeded.value,
        accepted,
        config: *cfg,
        instance: inst.gen_spec(),
    })
}
