//! End-to-end library pipeline: generate an instance, run the EA, persist
//! artifacts, sweep a small grid and summarize it.

use knapdiv::ea::{run, EaConfig};
use knapdiv::experiment::{
    run_experiment, summarize, BudgetSpec, ExperimentSpec, ResultsTable,
};
use knapdiv::fptas::exact_optimum;
use knapdiv::instance::{GenSpec, Instance, InstanceKind};
use knapdiv::population::entropy_ceiling;
use knapdiv::variation::{MutationOp, DEFAULT_HTBF_BETA};

#[test]
fn generate_run_and_persist() {
    let dir = tempfile::tempdir().unwrap();

    let spec = GenSpec { kind: InstanceKind::Invscorr, n: 40, r: 500, seed: 77 };
    let inst = Instance::generate(&spec).unwrap();
    let path = dir.path().join("inst.json");
    inst.write_json_file(&path).unwrap();
    let loaded = Instance::read_json_file(&path).unwrap();
    assert_eq!(inst, loaded);

    let capacity = loaded.capacity_for(5).unwrap();
    let cfg = EaConfig {
        mu: 8,
        epsilon: 0.5,
        crossover_prob: 0.8,
        mutation: MutationOp::Htbf { beta: DEFAULT_HTBF_BETA },
        repair: true,
        budget: 400,
        seed: 5,
    };
    let record = run(&loaded, capacity, &cfg).unwrap();
    let (opt, _) = exact_optimum(&loaded, capacity).unwrap();
    let record = record.with_opt_reference(opt);

    assert!(record.fptas_value <= opt);
    assert!(4 * record.fptas_value >= 3 * opt); // seeded at eps/2 = 0.25
    assert!(record.final_entropy() <= entropy_ceiling(loaded.n()) + 1e-9);
    for member in record.final_population.members() {
        assert!(2 * loaded.total_value(member) >= opt); // (1 - eps) chain
    }

    let rec_path = dir.path().join("run.json");
    record.write_json_file(&rec_path, None).unwrap();
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rec_path).unwrap()).unwrap();
    assert_eq!(value["instance"]["kind"], "invscorr");
    assert_eq!(value["quality"]["opt_reference"], opt);
    assert_eq!(value["entropy_trace"].as_array().unwrap().len(), 401);
}

#[test]
fn sweep_and_summarize_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = ExperimentSpec {
        kinds: vec![InstanceKind::Scorr, InstanceKind::Uncorr],
        n: 30,
        r: 200,
        d: vec![2, 10],
        mu: vec![6],
        epsilon: vec![0.5],
        operators: vec!["pbf".into(), "edo-bbf1".into()],
        crossover_prob: vec![0.0],
        repair: vec![true],
        repeats: 3,
        budget: BudgetSpec::Custom(60),
        master_seed: 13,
        htbf_beta: DEFAULT_HTBF_BETA,
    };
    let table = run_experiment(&spec, dir.path(), 3).unwrap();
    assert_eq!(table.rows().len(), 2 * 2 * 2 * 3);

    let reloaded = ResultsTable::read_csv(dir.path().join("results.csv")).unwrap();
    assert_eq!(table, reloaded);

    let summary = summarize(&table, 0.05).unwrap();
    // 4 setups x 2 operators
    assert_eq!(summary.rows.len(), 8);
    // one pair per setup
    assert_eq!(summary.stats.len(), 4);
    for row in &summary.rows {
        assert_eq!(row.runs, 3);
        assert!(row.mean_deviation_pct >= 0.0);
    }
    let summary_path = dir.path().join("summary.csv");
    summary.write_summary_csv(&summary_path).unwrap();
    summary.write_stats_csv(dir.path().join("summary.stats.csv")).unwrap();
    assert!(summary_path.exists());
}
