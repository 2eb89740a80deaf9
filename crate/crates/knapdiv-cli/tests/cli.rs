//! End-to-end checks of the command-line surface.

use std::path::Path;
use std::process::{Command, Output};

fn knapdiv(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_knapdiv"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should run")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = knapdiv(args, dir);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn generate_writes_a_valid_instance() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["generate", "--kind", "scorr", "--n", "25", "--r", "100", "--seed", "5", "--out", "inst.json"],
        dir.path(),
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("inst.json")).unwrap())
            .unwrap();
    assert_eq!(v["kind"], "scorr");
    assert_eq!(v["n"], 25);
    assert_eq!(v["R"], 100);
    let w = v["weights"].as_array().unwrap();
    let p = v["profits"].as_array().unwrap();
    assert_eq!(w.len(), 25);
    for (wi, pi) in w.iter().zip(p) {
        assert_eq!(pi.as_u64().unwrap() - wi.as_u64().unwrap(), 10);
    }
}

#[test]
fn generate_rejects_unknown_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let out = knapdiv(
        &["generate", "--kind", "nope", "--n", "5", "--r", "100", "--seed", "1", "--out", "x.json"],
        dir.path(),
    );
    assert!(!out.status.success());
}

#[test]
fn fptas_reports_value_and_optionally_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["generate", "--kind", "uncorr", "--n", "12", "--r", "50", "--seed", "3", "--out", "i.json"],
        dir.path(),
    );
    let text = ok(
        &["fptas", "--instance", "i.json", "--d", "5", "--eps", "0.5", "--exact"],
        dir.path(),
    );
    let field = |name: &str| -> u64 {
        text.lines()
            .find_map(|l| l.strip_prefix(&format!("{name} ")))
            .unwrap_or_else(|| panic!("missing {name} in {text}"))
            .parse()
            .unwrap()
    };
    let (value, opt) = (field("value"), field("opt"));
    assert!(value <= opt);
    assert!(2 * value >= opt, "FPTAS value {value} below half of {opt}");
}

#[test]
fn run_is_deterministic_and_writes_a_record() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        &["generate", "--kind", "usw", "--n", "20", "--r", "1000", "--seed", "8", "--out", "i.json"],
        dir.path(),
    );
    fn run_args(out: &str) -> Vec<&str> {
        vec![
            "run", "--instance", "i.json", "--d", "5", "--mu", "6", "--eps", "0.5",
            "--op", "edo-bbf2", "--pc", "0.8", "--repair", "on", "--budget", "restricted",
            "--seed", "42", "--out", out,
        ]
    }
    ok(&run_args("a.json"), dir.path());
    ok(&run_args("b.json"), dir.path());
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b, "identical seeds must give identical records");

    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["config"]["budget"], 6); // restricted = mu
    assert_eq!(v["final_population"].as_array().unwrap().len(), 6);
    let trace = v["entropy_trace"].as_array().unwrap();
    assert_eq!(trace.len(), 7); // budget <= 10^4 keeps every iteration
    assert_eq!(trace[0][1], 0.0);

    // custom numeric budgets are accepted
    let custom = vec![
        "run", "--instance", "i.json", "--d", "5", "--mu", "4", "--eps", "0.5",
        "--op", "bf", "--pc", "0.0", "--repair", "off", "--budget", "17",
        "--seed", "1", "--out", "c.json",
    ];
    ok(&custom, dir.path());
    let c: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("c.json")).unwrap())
            .unwrap();
    assert_eq!(c["config"]["budget"], 17);
}

#[test]
fn experiment_and_summarize_produce_csvs() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("spec.json"),
        r#"{
            "kinds": ["scorr", "usw"],
            "n": 20,
            "r": 100,
            "d": [2],
            "mu": [4],
            "epsilon": [0.5],
            "operators": ["bf", "edo-bbf1"],
            "crossover_prob": [0.0],
            "repair": [true],
            "repeats": 2,
            "budget": "restricted",
            "master_seed": 9
        }"#,
    )
    .unwrap();
    ok(
        &["experiment", "--spec", "spec.json", "--out", "res", "--workers", "2"],
        dir.path(),
    );
    let results = std::fs::read_to_string(dir.path().join("res/results.csv")).unwrap();
    assert_eq!(results.lines().count(), 9); // header + 2 kinds * 2 ops * 2 repeats
    assert!(results.starts_with("kind,d,mu,epsilon,operator,pc,repair,repeat,status,"));

    ok(
        &["summarize", "--results", "res/results.csv", "--alpha", "0.05", "--out", "summary.csv"],
        dir.path(),
    );
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 5); // header + 2 setups * 2 operators
    let stats = std::fs::read_to_string(dir.path().join("summary.stats.csv")).unwrap();
    assert!(stats.starts_with("setup,algo_a,algo_b,p_value,reject,direction"));
    assert_eq!(stats.lines().count(), 3); // header + one pair per setup
}
