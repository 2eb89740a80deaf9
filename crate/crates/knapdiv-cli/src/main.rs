use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use knapdiv::ea::{run, EaConfig};
use knapdiv::experiment::{run_experiment, summarize_files, BudgetSpec, ExperimentSpec};
use knapdiv::fptas::{exact_optimum, fptas_solve};
use knapdiv::instance::{GenSpec, Instance, InstanceKind};
use knapdiv::variation::{MutationOp, DEFAULT_HTBF_BETA};

/// Evolve diverse sets of high-quality knapsack packings.
#[derive(Parser)]
#[command(name = "knapdiv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance and write it as JSON.
    Generate {
        /// Instance class: scorr|invscorr|uncorr|usw
        #[arg(long)]
        kind: String,
        /// Number of items
        #[arg(long)]
        n: usize,
        /// Range parameter R
        #[arg(long)]
        r: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the approximation scheme on an instance file.
    Fptas {
        #[arg(long)]
        instance: PathBuf,
        /// Capacity factor D in 1..=10 (capacity = D/11 of the total weight)
        #[arg(long)]
        d: u32,
        #[arg(long)]
        eps: f64,
        /// Also run the exact oracle and report the true optimum.
        #[arg(long)]
        exact: bool,
    },
    /// Run the diversity-maximizing EA once and write the record as JSON.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        eps: f64,
        /// Mutation operator: bf|pbf|htbf|edo-bbf1|edo-bbf2
        #[arg(long)]
        op: String,
        /// Crossover probability in [0, 1]
        #[arg(long)]
        pc: f64,
        /// Repair operator: on|off
        #[arg(long)]
        repair: String,
        /// generous (mu*n), restricted (mu) or an explicit iteration count
        #[arg(long)]
        budget: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Power-law exponent for htbf
        #[arg(long, default_value_t = DEFAULT_HTBF_BETA)]
        beta: f64,
        /// Keep every stride-th trace point (default: the built-in rule)
        #[arg(long)]
        stride: Option<u64>,
    },
    /// Run a full sweep described by a JSON spec file.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: available cores)
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Aggregate a results CSV into summary and statistics CSVs.
    Summarize {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_on_off(s: &str) -> Result<bool> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        other => bail!("expected on|off, got {other:?}"),
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { kind, n, r, seed, out } => {
            let kind: InstanceKind = kind.parse()?;
            let inst = Instance::generate(&GenSpec { kind, n, r, seed })?;
            inst.write_json_file(&out)?;
            println!("wrote {} ({} items, sum of weights {})", out.display(), n, inst.sum_weights());
        }
        Command::Fptas { instance, d, eps, exact } => {
            let inst = Instance::read_json_file(&instance)
                .with_context(|| format!("reading {}", instance.display()))?;
            let capacity = inst.capacity_for(d)?;
            let approx = fptas_solve(&inst, capacity, eps)?;
            println!("capacity {capacity}");
            println!("value {}", approx.value);
            println!("weight {}", approx.weight);
            println!("guarantee {}", approx.guarantee);
            if exact {
                let (opt, _) = exact_optimum(&inst, capacity)?;
                println!("opt {opt}");
                if opt > 0 {
                    println!("ratio {:.6}", approx.value as f64 / opt as f64);
                }
            }
        }
        Command::Run {
            instance,
            d,
            mu,
            eps,
            op,
            pc,
            repair,
            budget,
            seed,
            out,
            beta,
            stride,
        } => {
            let inst = Instance::read_json_file(&instance)
                .with_context(|| format!("reading {}", instance.display()))?;
            let capacity = inst.capacity_for(d)?;
            let cfg = EaConfig {
                mu,
                epsilon: eps,
                crossover_prob: pc,
                mutation: MutationOp::from_name(&op, beta)?,
                repair: parse_on_off(&repair)?,
                budget: budget.parse::<BudgetSpec>()?.resolve(mu, inst.n()),
                seed,
            };
            let record = run(&inst, capacity, &cfg)?;
            record.write_json_file(&out, stride)?;
            println!(
                "final entropy {:.6} (ceiling {:.6}), accepted {}/{}",
                record.final_entropy(),
                knapdiv::population::entropy_ceiling(inst.n()),
                record.accepted,
                cfg.budget
            );
            println!("wrote {}", out.display());
        }
        Command::Experiment { spec, out, workers } => {
            let spec = ExperimentSpec::from_json_file(&spec)?;
            let workers = if workers == 0 {
                std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1)
            } else {
                workers
            };
            let table = run_experiment(&spec, &out, workers)?;
            println!(
                "{} rows in {}",
                table.rows().len(),
                out.join("results.csv").display()
            );
        }
        Command::Summarize { results, alpha, out } => {
            let stats_path = summarize_files(&results, alpha, &out)?;
            println!("wrote {} and {}", out.display(), stats_path.display());
        }
    }
    Ok(())
}
