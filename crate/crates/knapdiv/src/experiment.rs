//! Grid sweeps over instance classes and run parameters, with incremental
//! CSV persistence, resumability and summary statistics.
//!
//! Per-run seeds are derived by folding the grid coordinates into the master
//! seed with a splitmix64 mixer, so results do not depend on execution order
//! or worker count. One instance is generated per kind (from the master seed)
//! and shared by every cell of that kind.

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::ea::{run, EaConfig};
use crate::instance::{GenSpec, Instance, InstanceKind};
use crate::stats::{pairwise_compare, PairTest};
use crate::variation::{MutationOp, DEFAULT_HTBF_BETA};
use crate::{Error, Result};

/// Evaluation budget of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BudgetSpec {
    /// `mu * n` iterations.
    Generous,
    /// `mu` iterations.
    Restricted,
    Custom(u64),
}

impl BudgetSpec {
    pub fn resolve(&self, mu: usize, n: usize) -> u64 {
        match *self {
            BudgetSpec::Generous => (mu * n) as u64,
            BudgetSpec::Restricted => mu as u64,
            BudgetSpec::Custom(b) => b,
        }
    }
}

impl std::fmt::Display for BudgetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BudgetSpec::Generous => write!(f, "generous"),
            BudgetSpec::Restricted => write!(f, "restricted"),
            BudgetSpec::Custom(b) => write!(f, "{b}"),
        }
    }
}

impl FromStr for BudgetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generous" => Ok(BudgetSpec::Generous),
            "restricted" => Ok(BudgetSpec::Restricted),
            other => other.parse::<u64>().map(BudgetSpec::Custom).map_err(|_| {
                Error::InvalidParameter(format!(
                    "budget must be generous|restricted|INT, got {other:?}"
                ))
            }),
        }
    }
}

impl Serialize for BudgetSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BudgetSpec::Custom(b) => ser.serialize_u64(*b),
            other => ser.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for BudgetSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(de)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(BudgetSpec::Custom)
                .ok_or_else(|| D::Error::custom("budget must be a nonnegative integer")),
            _ => Err(D::Error::custom("budget must be a string or an integer")),
        }
    }
}

fn default_beta() -> f64 {
    DEFAULT_HTBF_BETA
}

/// Declarative description of a sweep: the cross product of all lists, each
/// cell repeated `repeats` times.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub kinds: Vec<InstanceKind>,
    pub n: usize,
    pub r: u64,
    pub d: Vec<u32>,
    pub mu: Vec<usize>,
    pub epsilon: Vec<f64>,
    /// Operator names: bf|pbf|htbf|edo-bbf1|edo-bbf2.
    pub operators: Vec<String>,
    pub crossover_prob: Vec<f64>,
    pub repair: Vec<bool>,
    pub repeats: u32,
    pub budget: BudgetSpec,
    pub master_seed: u64,
    #[serde(default = "default_beta")]
    pub htbf_beta: f64,
}

impl ExperimentSpec {
    pub fn from_json_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let spec: ExperimentSpec = serde_json::from_str(&fs::read_to_string(path)?)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::InvalidParameter("repeats must be >= 1".into()));
        }
        let empties = [
            ("kinds", self.kinds.is_empty()),
            ("d", self.d.is_empty()),
            ("mu", self.mu.is_empty()),
            ("epsilon", self.epsilon.is_empty()),
            ("operators", self.operators.is_empty()),
            ("crossover_prob", self.crossover_prob.is_empty()),
            ("repair", self.repair.is_empty()),
        ];
        if let Some((name, _)) = empties.iter().find(|(_, e)| *e) {
            return Err(Error::InvalidParameter(format!(
                "the grid is empty: no values for {name}"
            )));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            for &d in &self.d {
                for &mu in &self.mu {
                    for &epsilon in &self.epsilon {
                        for op in &self.operators {
                            for &pc in &self.crossover_prob {
                                for &repair in &self.repair {
                                    for repeat in 0..self.repeats {
                                        out.push(Cell {
                                            kind,
                                            d,
                                            mu,
                                            epsilon,
                                            operator: op.clone(),
                                            pc,
                                            repair,
                                            repeat,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Cell {
    kind: InstanceKind,
    d: u32,
    mu: usize,
    epsilon: f64,
    operator: String,
    pc: f64,
    repair: bool,
    repeat: u32,
}

/// splitmix64 finalizer; the standard constants.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(state: u64, v: u64) -> u64 {
    splitmix64(state ^ v.rotate_left(17))
}

fn operator_id(name: &str) -> u64 {
    match name {
        "bf" => 1,
        "pbf" => 2,
        "htbf" => 3,
        "edo-bbf1" => 4,
        "edo-bbf2" => 5,
        _ => 0,
    }
}

impl Cell {
    /// Seed derived from the coordinates alone; execution order never
    /// matters.
    fn run_seed(&self, master_seed: u64) -> u64 {
        let mut s = splitmix64(master_seed);
        s = mix(s, self.kind as u64 + 1);
        s = mix(s, u64::from(self.d));
        s = mix(s, self.mu as u64);
        s = mix(s, self.epsilon.to_bits());
        s = mix(s, operator_id(&self.operator));
        s = mix(s, self.pc.to_bits());
        s = mix(s, u64::from(self.repair));
        s = mix(s, u64::from(self.repeat));
        s
    }

    fn key(&self) -> RowKey {
        (
            self.kind.name().to_string(),
            self.d,
            self.mu,
            self.epsilon.to_bits(),
            self.operator.clone(),
            self.pc.to_bits(),
            self.repair,
            self.repeat,
        )
    }
}

/// Instance seed shared by every cell of one kind.
fn instance_seed(master_seed: u64, kind: InstanceKind, n: usize, r: u64) -> u64 {
    let mut s = splitmix64(master_seed ^ 0x696E_7374); // "inst"
    s = mix(s, kind as u64 + 1);
    s = mix(s, n as u64);
    s = mix(s, r);
    s
}

type RowKey = (String, u32, usize, u64, String, u64, bool, u32);

/// One completed (or failed) run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub kind: String,
    pub d: u32,
    pub mu: usize,
    pub epsilon: f64,
    pub operator: String,
    pub pc: f64,
    pub repair: bool,
    pub repeat: u32,
    pub status: String,
    pub final_entropy: f64,
    pub v_min: u64,
    pub fptas_value: u64,
    pub accepted: u64,
    pub wall_time: f64,
}

impl ResultRow {
    fn key(&self) -> RowKey {
        (
            self.kind.clone(),
            self.d,
            self.mu,
            self.epsilon.to_bits(),
            self.operator.clone(),
            self.pc.to_bits(),
            self.repair,
            self.repeat,
        )
    }
}

/// Locale-independent fixed-significant-digit formatting (6 digits).
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else { format!("{x}") };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // trim a trailing zero tail but keep at least one decimal digit
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn canonical_f64(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

/// Rows keyed by their grid coordinates; duplicates are rejected on load.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResultsTable {
    rows: Vec<ResultRow>,
}

impl ResultsTable {
    pub fn rows(&self) -> &[ResultRow] {
        &self.rows
    }

    pub fn from_rows(mut rows: Vec<ResultRow>) -> Result<Self> {
        rows.sort_by_key(|r| r.key());
        for pair in rows.windows(2) {
            if pair[0].key() == pair[1].key() {
                return Err(Error::Malformed(format!(
                    "duplicate result key {:?}",
                    pair[0].key()
                )));
            }
        }
        Ok(ResultsTable { rows })
    }

    pub fn read_csv<P: AsRef<Path>>(path: P) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let mut rows = Vec::new();
        for record in reader.deserialize() {
            rows.push(record?);
        }
        Self::from_rows(rows)
    }

    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        for row in &self.rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn execute_cell(cell: &Cell, inst: &Instance, spec: &ExperimentSpec) -> ResultRow {
    let started = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| -> Result<_> {
        let mutation = MutationOp::from_name(&cell.operator, spec.htbf_beta)?;
        let capacity = inst.capacity_for(cell.d)?;
        let cfg = EaConfig {
            mu: cell.mu,
            epsilon: cell.epsilon,
            crossover_prob: cell.pc,
            mutation,
            repair: cell.repair,
            budget: spec.budget.resolve(cell.mu, spec.n),
            seed: cell.run_seed(spec.master_seed),
        };
        run(inst, capacity, &cfg)
    }));
    let wall = started.elapsed().as_secs_f64();
    let mut row = ResultRow {
        kind: cell.kind.name().to_string(),
        d: cell.d,
        mu: cell.mu,
        epsilon: cell.epsilon,
        operator: cell.operator.clone(),
        pc: cell.pc,
        repair: cell.repair,
        repeat: cell.repeat,
        status: "failed".to_string(),
        final_entropy: f64::NAN,
        v_min: 0,
        fptas_value: 0,
        accepted: 0,
        wall_time: canonical_f64(wall),
    };
    match outcome {
        Ok(Ok(record)) => {
            row.status = "ok".to_string();
            row.final_entropy = canonical_f64(record.final_entropy());
            row.v_min = record.quality.v_min;
            row.fptas_value = record.fptas_value;
            row.accepted = record.accepted;
        }
        Ok(Err(err)) => {
            eprintln!("run {:?} failed: {err}", cell.key());
        }
        Err(_) => {
            eprintln!("run {:?} panicked", cell.key());
        }
    }
    row
}

/// Executes every pending grid cell, appending rows to `<out_dir>/results.csv`
/// as they complete. Keys already present in the file are skipped, so an
/// interrupted campaign resumes where it stopped. Returns the full table.
pub fn run_experiment(
    spec: &ExperimentSpec,
    out_dir: &Path,
    workers: usize,
) -> Result<ResultsTable> {
    spec.validate()?;
    fs::create_dir_all(out_dir)?;
    let results_path = out_dir.join("results.csv");

    let mut existing: Vec<ResultRow> = Vec::new();
    let mut done: BTreeSet<RowKey> = BTreeSet::new();
    if results_path.exists() {
        existing = ResultsTable::read_csv(&results_path)?.rows.clone();
        done.extend(existing.iter().map(|r| r.key()));
    }

    let instances: Vec<(InstanceKind, Instance)> = spec
        .kinds
        .iter()
        .map(|&kind| {
            let seed = instance_seed(spec.master_seed, kind, spec.n, spec.r);
            Instance::generate(&GenSpec { kind, n: spec.n, r: spec.r, seed })
                .map(|inst| (kind, inst))
        })
        .collect::<Result<_>>()?;

    let pending: Vec<Cell> =
        spec.cells().into_iter().filter(|c| !done.contains(&c.key())).collect();

    let workers = workers.max(1).min(pending.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<ResultRow>();

    let mut fresh: Vec<ResultRow> = Vec::with_capacity(pending.len());
    std::thread::scope(|scope| -> Result<()> {
        for _ in 0..workers {
            let tx = tx.clone();
            let pending = &pending;
            let next = &next;
            let instances = &instances;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = pending.get(i) else { break };
                let inst = &instances.iter().find(|(k, _)| *k == cell.kind).unwrap().1;
                let row = execute_cell(cell, inst, spec);
                if tx.send(row).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        // single writer: append rows as they arrive
        let mut file = OpenOptions::new().create(true).append(true).open(&results_path)?;
        let need_header = existing.is_empty() && file.metadata()?.len() == 0;
        let mut writer = csv::WriterBuilder::new()
            .has_headers(need_header)
            .from_writer(Vec::new());
        for row in rx {
            writer.serialize(&row)?;
            let bytes = writer.into_inner().map_err(|e| Error::Malformed(e.to_string()))?;
            file.write_all(&bytes)?;
            file.flush()?;
            writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            fresh.push(row);
        }
        Ok(())
    })?;

    existing.extend(fresh);
    ResultsTable::from_rows(existing)
}

/// Per-(setup, operator) aggregate.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SummaryRow {
    pub kind: String,
    pub d: u32,
    pub mu: usize,
    pub epsilon: f64,
    pub pc: f64,
    pub repair: bool,
    pub operator: String,
    pub runs: usize,
    pub mean_entropy: f64,
    pub std_entropy: f64,
    /// Mean percentage deviation from the best entropy in the setup.
    pub mean_deviation_pct: f64,
}

/// One pairwise test labeled with its setup.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StatsRow {
    pub setup: String,
    pub algo_a: String,
    pub algo_b: String,
    pub p_value: f64,
    pub reject: bool,
    pub direction: String,
}

#[derive(Clone, Debug, Default)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub stats: Vec<StatsRow>,
}

impl Summary {
    pub fn write_summary_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        for row in &self.rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn write_stats_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        for row in &self.stats {
            writer.serialize(row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn sample_std(values: &[f64], mean: f64) -> f64 {
    if values.len() <= 1 {
        return 0.0;
    }
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// Mean/std of final entropy per setup and operator, the deviation metric,
/// and Holm-corrected pairwise rank-sum tests between the operators of each
/// setup. Failed rows are skipped with a warning.
pub fn summarize(table: &ResultsTable, alpha: f64) -> Result<Summary> {
    use std::collections::BTreeMap;

    type SetupKey = (String, u32, usize, u64, u64, bool);
    let mut groups: BTreeMap<SetupKey, BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    for row in table.rows() {
        if row.status != "ok" {
            eprintln!("skipping failed row {:?}", (&row.kind, row.d, row.mu, row.repeat));
            continue;
        }
        let key = (
            row.kind.clone(),
            row.d,
            row.mu,
            row.epsilon.to_bits(),
            row.pc.to_bits(),
            row.repair,
        );
        groups.entry(key).or_default().entry(row.operator.clone()).or_default().push(row.final_entropy);
    }

    let mut summary = Summary::default();
    for ((kind, d, mu, eps_bits, pc_bits, repair), by_op) in &groups {
        let epsilon = f64::from_bits(*eps_bits);
        let pc = f64::from_bits(*pc_bits);
        let best = by_op
            .values()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        for (op, values) in by_op {
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let deviation = if best > 0.0 {
                values.iter().map(|v| 100.0 * (best - v) / best).sum::<f64>()
                    / values.len() as f64
            } else {
                0.0
            };
            summary.rows.push(SummaryRow {
                kind: kind.clone(),
                d: *d,
                mu: *mu,
                epsilon,
                pc,
                repair: *repair,
                operator: op.clone(),
                runs: values.len(),
                mean_entropy: canonical_f64(mean),
                std_entropy: canonical_f64(sample_std(values, mean)),
                mean_deviation_pct: canonical_f64(deviation),
            });
        }

        if by_op.len() >= 2 {
            let named: Vec<(String, Vec<f64>)> =
                by_op.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            let report = pairwise_compare(&named, alpha)?;
            let setup = format!("{kind}-d{d}-mu{mu}-eps{epsilon}-pc{pc}-repair{repair}");
            for PairTest { algo_a, algo_b, p_value, reject, direction } in report.pairs {
                summary.stats.push(StatsRow {
                    setup: setup.clone(),
                    algo_a,
                    algo_b,
                    p_value,
                    reject,
                    direction: direction.name().to_string(),
                });
            }
        }
    }
    Ok(summary)
}

/// Convenience wrapper for the CLI: summarize a results file and write the
/// summary plus a sibling `<out>.stats.csv`.
pub fn summarize_files(results: &Path, alpha: f64, out: &Path) -> Result<PathBuf> {
    let table = ResultsTable::read_csv(results)?;
    let summary = summarize(&table, alpha)?;
    summary.write_summary_csv(out)?;
    let stats_path = out.with_extension("stats.csv");
    summary.write_stats_csv(&stats_path)?;
    Ok(stats_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> ExperimentSpec {
        ExperimentSpec {
            kinds: vec![InstanceKind::Scorr],
            n: 20,
            r: 100,
            d: vec![2],
            mu: vec![5],
            epsilon: vec![0.5],
            operators: vec![
                "bf".into(),
                "pbf".into(),
                "htbf".into(),
                "edo-bbf1".into(),
                "edo-bbf2".into(),
            ],
            crossover_prob: vec![0.0],
            repair: vec![true],
            repeats: 1,
            budget: BudgetSpec::Restricted,
            master_seed: 7,
            htbf_beta: DEFAULT_HTBF_BETA,
        }
    }

    #[test]
    fn grid_cardinality_is_the_cross_product() {
        let dir = tempfile::tempdir().unwrap();
        let table = run_experiment(&tiny_spec(), dir.path(), 2).unwrap();
        assert_eq!(table.rows().len(), 5);
        assert!(table.rows().iter().all(|r| r.status == "ok"));
    }

    #[test]
    fn rerun_resumes_and_reproduces_the_same_table() {
        let dir = tempfile::tempdir().unwrap();
        let spec = tiny_spec();
        let first = run_experiment(&spec, dir.path(), 2).unwrap();
        let again = run_experiment(&spec, dir.path(), 1).unwrap();
        assert_eq!(first, again);

        // a fresh directory also reproduces the same content
        let dir2 = tempfile::tempdir().unwrap();
        let other = run_experiment(&spec, dir2.path(), 4).unwrap();
        let strip = |t: &ResultsTable| {
            t.rows()
                .iter()
                .map(|r| (r.key(), r.final_entropy.to_bits(), r.accepted))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&first), strip(&other));
    }

    #[test]
    fn csv_round_trip_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let table = run_experiment(&tiny_spec(), dir.path(), 2).unwrap();
        let path = dir.path().join("copy.csv");
        table.write_csv(&path).unwrap();
        let back = ResultsTable::read_csv(&path).unwrap();
        assert_eq!(table, back);
    }

    #[test]
    fn seeds_depend_on_coordinates_not_order() {
        let spec = tiny_spec();
        let mut cells = spec.cells();
        let seeds: Vec<u64> = cells.iter().map(|c| c.run_seed(spec.master_seed)).collect();
        cells.reverse();
        let reversed: Vec<u64> =
            cells.iter().map(|c| c.run_seed(spec.master_seed)).collect();
        let mut back = reversed.clone();
        back.reverse();
        assert_eq!(seeds, back);
        // distinct cells get distinct seeds
        let unique: BTreeSet<u64> = seeds.iter().copied().collect();
        assert_eq!(unique.len(), seeds.len());
    }

    #[test]
    fn summarize_computes_means_and_deviation() {
        let mk = |op: &str, repeat: u32, h: f64| ResultRow {
            kind: "scorr".into(),
            d: 2,
            mu: 5,
            epsilon: 0.5,
            operator: op.into(),
            pc: 0.0,
            repair: true,
            repeat,
            status: "ok".into(),
            final_entropy: h,
            v_min: 10,
            fptas_value: 12,
            accepted: 3,
            wall_time: 0.01,
        };
        let table = ResultsTable::from_rows(vec![
            mk("bf", 0, 2.0),
            mk("bf", 1, 4.0),
            mk("pbf", 0, 8.0),
        ])
        .unwrap();
        let summary = summarize(&table, 0.05).unwrap();
        assert_eq!(summary.rows.len(), 2);
        let bf = summary.rows.iter().find(|r| r.operator == "bf").unwrap();
        assert_eq!(bf.mean_entropy, 3.0);
        // canonicalized to six significant digits
        assert!((bf.std_entropy - std::f64::consts::SQRT_2).abs() < 1e-4);
        // deviations from the setup best (8.0): bf (75, 50) -> 62.5, pbf -> 0
        assert!((bf.mean_deviation_pct - 62.5).abs() < 1e-9);
        let pbf = summary.rows.iter().find(|r| r.operator == "pbf").unwrap();
        assert_eq!(pbf.std_entropy, 0.0); // single repeat
        assert_eq!(pbf.mean_deviation_pct, 0.0); // the best run itself
        assert_eq!(summary.stats.len(), 1);
    }

    #[test]
    fn summarize_handles_the_all_zero_setup() {
        let mk = |repeat: u32| ResultRow {
            kind: "scorr".into(),
            d: 10,
            mu: 5,
            epsilon: 0.1,
            operator: "bf".into(),
            pc: 0.0,
            repair: false,
            repeat,
            status: "ok".into(),
            final_entropy: 0.0,
            v_min: 1,
            fptas_value: 1,
            accepted: 0,
            wall_time: 0.01,
        };
        let table = ResultsTable::from_rows(vec![mk(0), mk(1)]).unwrap();
        let summary = summarize(&table, 0.05).unwrap();
        assert_eq!(summary.rows[0].mean_entropy, 0.0);
        assert_eq!(summary.rows[0].std_entropy, 0.0);
        assert_eq!(summary.rows[0].mean_deviation_pct, 0.0);
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let row = ResultRow {
            kind: "usw".into(),
            d: 2,
            mu: 3,
            epsilon: 0.5,
            operator: "bf".into(),
            pc: 0.0,
            repair: false,
            repeat: 0,
            status: "ok".into(),
            final_entropy: 1.0,
            v_min: 1,
            fptas_value: 1,
            accepted: 1,
            wall_time: 0.1,
        };
        assert!(ResultsTable::from_rows(vec![row.clone(), row]).is_err());
    }

    #[test]
    fn sig_format_is_stable_under_reparsing() {
        for &x in &[0.0, 36.788124, 1.0 / 3.0, 123456.789, 0.000123456789, 5.0] {
            let once = fmt_sig(x);
            let twice = fmt_sig(once.parse::<f64>().unwrap());
            assert_eq!(once, twice, "x = {x}");
        }
        assert_eq!(fmt_sig(36.7881441), "36.7881");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn empty_grid_dimensions_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = tiny_spec();
        spec.epsilon.clear();
        assert!(run_experiment(&spec, dir.path(), 1).is_err());
        let mut spec = tiny_spec();
        spec.repeats = 0;
        assert!(run_experiment(&spec, dir.path(), 1).is_err());
    }

    #[test]
    fn budget_spec_parses_and_resolves() {
        assert_eq!("generous".parse::<BudgetSpec>().unwrap(), BudgetSpec::Generous);
        assert_eq!("restricted".parse::<BudgetSpec>().unwrap(), BudgetSpec::Restricted);
        assert_eq!("123".parse::<BudgetSpec>().unwrap(), BudgetSpec::Custom(123));
        assert!("sometimes".parse::<BudgetSpec>().is_err());
        assert_eq!(BudgetSpec::Generous.resolve(25, 100), 2_500);
        assert_eq!(BudgetSpec::Restricted.resolve(25, 100), 25);
        assert_eq!(BudgetSpec::Custom(9).resolve(25, 100), 9);
    }
}
