//! Knapsack instances and the four benchmark generator classes.
//!
//! Generation is a pure function of `(kind, n, R, seed)`. The stream is a
//! ChaCha8 generator seeded with the 64-bit seed; per item the draws are made
//! in the order given in [`Instance::generate`], so equal specs produce
//! bit-identical instances on every platform.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::packing::Packing;
use crate::{Error, Result};

/// The four benchmark instance classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    /// Strongly correlated: `w ~ U{1..R}`, `v = w + R/10`.
    Scorr,
    /// Inversely strongly correlated: `v ~ U{1..R}`, `w = v + R/10`.
    Invscorr,
    /// Uncorrelated: `w, v ~ U{1..R}` independently.
    Uncorr,
    /// Uniform similar weights: `w ~ U{100000..100100}`, `v ~ U{1..1000}`.
    Usw,
}

impl InstanceKind {
    pub const ALL: [InstanceKind; 4] = [
        InstanceKind::Scorr,
        InstanceKind::Invscorr,
        InstanceKind::Uncorr,
        InstanceKind::Usw,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            InstanceKind::Scorr => "scorr",
            InstanceKind::Invscorr => "invscorr",
            InstanceKind::Uncorr => "uncorr",
            InstanceKind::Usw => "usw",
        }
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scorr" => Ok(InstanceKind::Scorr),
            "invscorr" => Ok(InstanceKind::Invscorr),
            "uncorr" => Ok(InstanceKind::Uncorr),
            "usw" => Ok(InstanceKind::Usw),
            other => Err(Error::InvalidParameter(format!(
                "unknown instance kind {other:?} (expected scorr|invscorr|uncorr|usw)"
            ))),
        }
    }
}

/// Everything needed to regenerate an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: InstanceKind,
    pub n: usize,
    #[serde(rename = "R")]
    pub r: u64,
    pub seed: u64,
}

/// A 0-1 knapsack instance with its generation metadata.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    kind: InstanceKind,
    n: usize,
    #[serde(rename = "R")]
    r: u64,
    seed: u64,
    weights: Vec<u64>,
    profits: Vec<u64>,
}

impl Instance {
    /// Builds an instance from explicit data, validating the type invariants.
    pub fn new(
        kind: InstanceKind,
        r: u64,
        seed: u64,
        weights: Vec<u64>,
        profits: Vec<u64>,
    ) -> Result<Self> {
        if weights.is_empty() || weights.len() != profits.len() {
            return Err(Error::InvalidParameter(format!(
                "need equal nonzero item counts, got {} weights and {} profits",
                weights.len(),
                profits.len()
            )));
        }
        if weights.contains(&0) || profits.contains(&0) {
            return Err(Error::InvalidParameter(
                "weights and profits must be >= 1".into(),
            ));
        }
        Ok(Instance { kind, n: weights.len(), r, seed, weights, profits })
    }

    /// Deterministically samples an instance of the given class.
    pub fn generate(spec: &GenSpec) -> Result<Self> {
        if spec.n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        if spec.r < 10 {
            return Err(Error::InvalidParameter("R must be >= 10".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut weights = Vec::with_capacity(spec.n);
        let mut profits = Vec::with_capacity(spec.n);
        let shift = spec.r / 10;
        for _ in 0..spec.n {
            match spec.kind {
                InstanceKind::Scorr => {
                    let w = rng.gen_range(1..=spec.r);
                    weights.push(w);
                    profits.push(w + shift);
                }
                InstanceKind::Invscorr => {
                    let v = rng.gen_range(1..=spec.r);
                    profits.push(v);
                    weights.push(v + shift);
                }
                InstanceKind::Uncorr => {
                    weights.push(rng.gen_range(1..=spec.r));
                    profits.push(rng.gen_range(1..=spec.r));
                }
                InstanceKind::Usw => {
                    weights.push(rng.gen_range(100_000..=100_100));
                    profits.push(rng.gen_range(1..=1_000));
                }
            }
        }
        Ok(Instance {
            kind: spec.kind,
            n: spec.n,
            r: spec.r,
            seed: spec.seed,
            weights,
            profits,
        })
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn profits(&self) -> &[u64] {
        &self.profits
    }

    pub fn gen_spec(&self) -> GenSpec {
        GenSpec { kind: self.kind, n: self.n, r: self.r, seed: self.seed }
    }

    pub fn sum_weights(&self) -> u64 {
        self.weights.iter().sum()
    }

    pub fn sum_profits(&self) -> u64 {
        self.profits.iter().sum()
    }

    /// Total weight of a packing. Panics if the packing length differs from `n`.
    pub fn total_weight(&self, x: &Packing) -> u64 {
        assert_eq!(x.len(), self.n, "packing length mismatch");
        self.weights
            .iter()
            .zip(x.bits())
            .filter(|(_, &b)| b)
            .map(|(&w, _)| w)
            .sum()
    }

    /// Total profit of a packing. Panics if the packing length differs from `n`.
    pub fn total_value(&self, x: &Packing) -> u64 {
        assert_eq!(x.len(), self.n, "packing length mismatch");
        self.profits
            .iter()
            .zip(x.bits())
            .filter(|(_, &b)| b)
            .map(|(&v, _)| v)
            .sum()
    }

    /// Knapsack capacity `floor(D * sum(w) / 11)` for `D` in `1..=10`.
    pub fn capacity_for(&self, d: u32) -> Result<u64> {
        if !(1..=10).contains(&d) {
            return Err(Error::InvalidParameter(format!(
                "D must be in 1..=10, got {d}"
            )));
        }
        Ok(u64::from(d) * self.sum_weights() / 11)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(s)?;
        if inst.n != inst.weights.len() || inst.n != inst.profits.len() {
            return Err(Error::Malformed(
                "instance field n disagrees with the item lists".into(),
            ));
        }
        if inst.weights.contains(&0) || inst.profits.contains(&0) {
            return Err(Error::Malformed("weights and profits must be >= 1".into()));
        }
        Ok(inst)
    }

    pub fn write_json_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read_json_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}
