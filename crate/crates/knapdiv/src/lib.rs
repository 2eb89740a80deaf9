//! Evolving diverse sets of high-quality packings for the 0-1 knapsack problem.
//!
//! The library maintains a population of feasible packings that all meet a
//! minimum profit threshold and maximizes an entropy measure over per-item
//! inclusion frequencies. The main pieces:
//!
//! - [`instance`]: problem instances and the four benchmark generator classes
//! - [`packing`] / [`population`]: solution encoding, frequency bookkeeping
//!   and the entropy measure
//! - [`fptas`]: exact dynamic-programming oracle and the profit-scaling
//!   approximation scheme used to seed runs
//! - [`variation`]: the five mutation operators, the frequency-guided repair
//!   operator and crossover
//! - [`ea`]: the steady-state (mu+1) evolutionary loop with entropy-maximizing
//!   survivor selection
//! - [`stats`]: rank-sum tests with Holm correction for comparing operators
//! - [`experiment`]: grid sweeps, CSV persistence and summaries
//!
//! All randomized components draw from a ChaCha8 stream seeded with an
//! explicit 64-bit seed, so any run is reproducible from its configuration.

pub mod ea;
pub mod experiment;
pub mod fptas;
pub mod instance;
pub mod packing;
pub mod population;
pub mod stats;
pub mod variation;

pub use ea::{run, select_survivor, EaConfig, QualityBound, RunRecord};
pub use fptas::{exact_optimum, fptas_solve, ApproxResult};
pub use instance::{GenSpec, Instance, InstanceKind};
pub use packing::Packing;
pub use population::Population;
pub use variation::MutationOp;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exact oracle too large: {cells} DP cells exceed the cap of {cap}")]
    OracleTooLarge { cells: u128, cap: u128 },
    #[error("empty sample")]
    EmptySample,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
