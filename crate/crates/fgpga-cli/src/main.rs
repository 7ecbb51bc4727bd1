//! Benchmark command line for the solver suite.
//!
//! Subcommands: `generate` (instance ladders), `run` (solver comparison
//! matrix), `export-traces` (plot-ready convergence series) and `oracle`
//! (exhaustive optimum for tiny instances). The output directory comes from
//! `--out`, falling back to the `FGPGA_OUT` environment variable, then to
//! `./out`.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use fgpga::experiment::{self, Algorithm, ExperimentConfig, RESULTS_FILE};
use fgpga::graph::Instance;
use fgpga::oracle;

#[derive(Parser)]
#[command(
    name = "fgpga",
    version,
    about = "Capacity-constrained graph partitioning benchmark suite"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Inclusive size ladder: `A..B:STEP` or a comma list `100,200,300`.
#[derive(Clone, Debug)]
struct SizeSpec(Vec<usize>);

impl FromStr for SizeSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((range, step)) = s.split_once(':') {
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| format!("expected A..B:STEP, got `{s}`"))?;
            let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
            let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
            let step: usize = step.trim().parse().map_err(|e| format!("{e}"))?;
            if step == 0 || hi < lo {
                return Err(format!("degenerate size range `{s}`"));
            }
            Ok(SizeSpec((lo..=hi).step_by(step).collect()))
        } else {
            let sizes: Result<Vec<usize>, _> =
                s.split(',').map(|t| t.trim().parse::<usize>()).collect();
            let sizes = sizes.map_err(|e| format!("{e}"))?;
            if sizes.is_empty() {
                return Err("empty size list".to_string());
            }
            Ok(SizeSpec(sizes))
        }
    }
}

#[derive(Args)]
struct OutArg {
    /// Output directory (overrides the FGPGA_OUT environment variable).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutArg {
    fn resolve(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os("FGPGA_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate benchmark instances and write them as JSON files.
    Generate {
        /// Vertex-count ladder, e.g. `100..1000:100` or `100,200,500`.
        #[arg(long)]
        sizes: SizeSpec,
        /// Base seed; instance k of the ladder uses seed + k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the (algorithm x instance x repetition) comparison matrix.
    Run {
        /// Instance JSON files to load.
        #[arg(long, num_args = 1.., value_name = "FILE")]
        instances: Vec<PathBuf>,
        /// Generate this ladder into the output directory and run on it.
        #[arg(long, conflicts_with = "instances")]
        sizes: Option<SizeSpec>,
        /// Seed for `--sizes` generation.
        #[arg(long, default_value_t = 0)]
        gen_seed: u64,
        /// Comma-separated subset of fgpga, fgpga-no-greedy, sa.
        #[arg(long, default_value = "fgpga,sa", value_delimiter = ',')]
        algorithms: Vec<String>,
        /// Repetitions per (algorithm, instance) cell.
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Base seed; repetition k runs with seed + k.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker cap for the run matrix.
        #[arg(long)]
        workers: Option<usize>,
        /// Override the GA generation budget (SA budget stays matched).
        #[arg(long)]
        generations: Option<usize>,
        /// Override the GA population size.
        #[arg(long)]
        population: Option<usize>,
        /// Write 0 in the timing column so outputs are byte-reproducible.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// Export plot-ready convergence series from a completed run directory.
    ExportTraces {
        #[command(flatten)]
        out: OutArg,
    },
    /// Exhaustively solve a tiny instance to proven optimality.
    Oracle {
        #[arg(long)]
        instance: PathBuf,
        /// Enumeration refuses above this many states.
        #[arg(long, default_value_t = oracle::DEFAULT_STATE_BUDGET)]
        budget: u64,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate { sizes, seed, out } => generate(sizes, seed, out),
        Command::Run {
            instances,
            sizes,
            gen_seed,
            algorithms,
            reps,
            seed,
            workers,
            generations,
            population,
            no_timing,
            out,
        } => run(
            instances,
            sizes,
            gen_seed,
            algorithms,
            reps,
            seed,
            workers,
            generations,
            population,
            no_timing,
            out,
        ),
        Command::ExportTraces { out } => export(out),
        Command::Oracle { instance, budget } => solve_oracle(instance, budget),
    }
}

fn generate(sizes: SizeSpec, seed: u64, out: OutArg) -> Result<()> {
    let dir = out.resolve();
    let written = experiment::generate_and_write(&sizes.0, seed, &dir)
        .context("instance generation failed")?;
    for (path, instance) in &written {
        println!(
            "{}: V={} E={} Mn={} total_demand={:.3} total_capacity={:.0}",
            path.display(),
            instance.app.vertex_count(),
            instance.app.edge_count(),
            instance.machines.machine_count(),
            instance.app.total_demand(),
            instance.machines.total_capacity(),
        );
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run(
    instance_paths: Vec<PathBuf>,
    sizes: Option<SizeSpec>,
    gen_seed: u64,
    algorithms: Vec<String>,
    reps: usize,
    seed: u64,
    workers: Option<usize>,
    generations: Option<usize>,
    population: Option<usize>,
    no_timing: bool,
    out: OutArg,
) -> Result<()> {
    let dir = out.resolve();
    let algorithms: Vec<Algorithm> = algorithms
        .iter()
        .map(|s| s.parse::<Algorithm>().map_err(anyhow::Error::from))
        .collect::<Result<_>>()?;
    if reps == 0 {
        bail!("--reps must be at least 1");
    }

    let instances: Vec<Instance> = if let Some(sizes) = sizes {
        let target = dir.join("instances");
        experiment::generate_and_write(&sizes.0, gen_seed, &target)?
            .into_iter()
            .map(|(_, instance)| instance)
            .collect()
    } else {
        if instance_paths.is_empty() {
            bail!("provide --instances or --sizes");
        }
        instance_paths
            .iter()
            .map(|p| experiment::load_instance(p).map_err(anyhow::Error::from))
            .collect::<Result<_>>()?
    };

    let config = ExperimentConfig {
        algorithms,
        repetitions: reps,
        seed_base: seed,
        generations,
        population,
        workers,
        record_timing: !no_timing,
    };
    let reports = experiment::run_and_write(&config, &instances, &dir)?;
    println!(
        "{} runs -> {}",
        reports.len(),
        dir.join(RESULTS_FILE).display()
    );
    for row in experiment::aggregate(&reports, &instances) {
        println!(
            "{:>16} on {:>14}: best {} avg {} feasible {}",
            row.algorithm,
            row.instance,
            row.best_cost.map_or("-".into(), |c| format!("{c:.3}")),
            row.avg_cost.map_or("-".into(), |c| format!("{c:.3}")),
            row.all_feasible,
        );
    }
    Ok(())
}

fn export(out: OutArg) -> Result<()> {
    let dir = out.resolve();
    let files = experiment::export_traces(&dir).context("trace export failed")?;
    for f in files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn solve_oracle(path: PathBuf, budget: u64) -> Result<()> {
    let instance = experiment::load_instance(&path)?;
    let result = oracle::solve_exact(&instance, budget)?;
    println!("states_enumerated: {}", result.states_enumerated);
    match result.optimum {
        Some(opt) => {
            println!("optimal_cost: {}", opt.cost);
            println!(
                "optimal_genes: [{}]",
                opt.genes
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            );
        }
        None => println!("optimal_cost: infeasible"),
    }
    Ok(())
}
