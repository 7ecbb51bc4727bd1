//! Benchmark harness: runs the (algorithm × instance × repetition) matrix,
//! writes the results CSV plus per-run trace files, and exports plot-ready
//! convergence series. Run ordering in every output file is sorted, so
//! concurrent execution cannot reorder anything.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::ga::{run_fgpga, GaParams, ALGORITHM_FGPGA, ALGORITHM_FGPGA_NO_GREEDY};
use crate::graph::{is_feasible, Instance};
use crate::report::RunReport;
use crate::sa::{run_sa, SaParams, ALGORITHM_SA};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse instance {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("unknown algorithm `{0}` (expected fgpga, fgpga-no-greedy or sa)")]
    UnknownAlgorithm(String),
    #[error("missing trace files for runs: {0:?}")]
    MissingTraces(Vec<String>),
    #[error("no per-run rows found in {0}")]
    EmptyResults(PathBuf),
    #[error("solver reported an infeasible assignment for {algorithm} on {instance} seed {seed}")]
    InfeasibleOutput {
        algorithm: String,
        instance: String,
        seed: u64,
    },
}

fn io_err(path: &Path, source: std::io::Error) -> ExperimentError {
    ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Algorithm {
    Fgpga,
    FgpgaNoGreedy,
    Sa,
}

impl Algorithm {
    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::Fgpga => ALGORITHM_FGPGA,
            Algorithm::FgpgaNoGreedy => ALGORITHM_FGPGA_NO_GREEDY,
            Algorithm::Sa => ALGORITHM_SA,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = ExperimentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            ALGORITHM_FGPGA => Ok(Algorithm::Fgpga),
            ALGORITHM_FGPGA_NO_GREEDY => Ok(Algorithm::FgpgaNoGreedy),
            ALGORITHM_SA => Ok(Algorithm::Sa),
            other => Err(ExperimentError::UnknownAlgorithm(other.to_string())),
        }
    }
}

/// One full experiment over loaded instances.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithms: Vec<Algorithm>,
    pub repetitions: usize,
    /// Repetition k of every cell runs with seed `seed_base + k`, so adding
    /// repetitions never perturbs earlier runs.
    pub seed_base: u64,
    /// GA generation budget; `None` uses the stock per-size budget.
    pub generations: Option<usize>,
    pub population: Option<usize>,
    /// Worker cap for the run matrix (parallel feature only).
    pub workers: Option<usize>,
    /// When false, the timing column is written as 0 so repeated runs produce
    /// byte-identical CSVs.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithms: vec![Algorithm::Fgpga, Algorithm::Sa],
            repetitions: 10,
            seed_base: 0,
            generations: None,
            population: None,
            workers: None,
            record_timing: true,
        }
    }
}

impl ExperimentConfig {
    fn ga_params(&self, vertex_count: usize, seed: u64, greedy: bool) -> GaParams {
        let mut p = GaParams::for_vertex_count(vertex_count);
        if let Some(g) = self.generations {
            p.max_generations = g;
        }
        if let Some(n) = self.population {
            p.population_size = n;
        }
        if !greedy {
            p.greedy_mutation_rate = 0.0;
        }
        p.rng_seed = seed;
        p
    }

    fn sa_params(&self, vertex_count: usize, seed: u64) -> SaParams {
        // Matched evaluation budget against the GA configuration in force.
        let ga = self.ga_params(vertex_count, seed, true);
        SaParams::matched_budget(vertex_count, &ga).with_seed(seed)
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, ExperimentError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Instance::from_json(&text).map_err(|e| ExperimentError::Parse {
        path: path.to_path_buf(),
        source: e,
    })
}

fn run_cell(
    config: &ExperimentConfig,
    algorithm: Algorithm,
    instance: &Instance,
    rep: usize,
) -> RunReport {
    let seed = config.seed_base + rep as u64;
    let v = instance.app.vertex_count();
    let mut report = match algorithm {
        Algorithm::Fgpga => run_fgpga(instance, &config.ga_params(v, seed, true)),
        Algorithm::FgpgaNoGreedy => run_fgpga(instance, &config.ga_params(v, seed, false)),
        Algorithm::Sa => run_sa(instance, &config.sa_params(v, seed)),
    };
    report.algorithm = algorithm.id().to_string();
    report
}

/// Execute the full run matrix. Reports come back sorted by (algorithm,
/// instance, seed) regardless of scheduling, and every feasible report is
/// re-verified against the capacity predicate at this boundary.
pub fn run_experiment(
    config: &ExperimentConfig,
    instances: &[Instance],
) -> Result<Vec<RunReport>, ExperimentError> {
    let mut cells = Vec::new();
    for &algorithm in &config.algorithms {
        for (idx, _) in instances.iter().enumerate() {
            for rep in 0..config.repetitions {
                cells.push((algorithm, idx, rep));
            }
        }
    }

    #[cfg(feature = "parallel")]
    let mut reports: Vec<RunReport> = {
        use rayon::prelude::*;
        let body = || {
            cells
                .par_iter()
                .map(|&(algorithm, idx, rep)| run_cell(config, algorithm, &instances[idx], rep))
                .collect()
        };
        match config.workers {
            Some(workers) => rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("worker pool")
                .install(body),
            None => body(),
        }
    };
    #[cfg(not(feature = "parallel"))]
    let mut reports: Vec<RunReport> = cells
        .iter()
        .map(|&(algorithm, idx, rep)| run_cell(config, algorithm, &instances[idx], rep))
        .collect();

    reports.sort_by(|a, b| {
        (&a.algorithm, &a.instance, a.seed).cmp(&(&b.algorithm, &b.instance, b.seed))
    });

    for report in &reports {
        if report.feasible {
            let genes = report.best_genes.as_deref().unwrap_or(&[]);
            let instance = instances
                .iter()
                .find(|i| i.name == report.instance)
                .expect("report references a loaded instance");
            if !is_feasible(&instance.app, &instance.machines, genes) {
                return Err(ExperimentError::InfeasibleOutput {
                    algorithm: report.algorithm.clone(),
                    instance: report.instance.clone(),
                    seed: report.seed,
                });
            }
        }
    }
    Ok(reports)
}

/// Aggregate of one (algorithm, instance) cell: best = min over repetitions,
/// avg = arithmetic mean.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub algorithm: String,
    pub instance: String,
    pub vertex_count: usize,
    pub machine_count: usize,
    pub best_cost: Option<f64>,
    pub avg_cost: Option<f64>,
    pub mean_wall_time_ms: f64,
    pub all_feasible: bool,
}

pub fn aggregate(reports: &[RunReport], instances: &[Instance]) -> Vec<AggregateRow> {
    let mut keys: Vec<(String, String)> = reports
        .iter()
        .map(|r| (r.algorithm.clone(), r.instance.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    keys.iter()
        .map(|(algorithm, instance_name)| {
            let cell: Vec<&RunReport> = reports
                .iter()
                .filter(|r| &r.algorithm == algorithm && &r.instance == instance_name)
                .collect();
            let costs: Vec<f64> = cell.iter().filter_map(|r| r.best_cost).collect();
            let best_cost = costs.iter().cloned().reduce(f64::min);
            let avg_cost = if costs.is_empty() {
                None
            } else {
                Some(costs.iter().sum::<f64>() / costs.len() as f64)
            };
            let mean_wall = cell.iter().map(|r| r.wall_time_ms).sum::<f64>() / cell.len() as f64;
            let shape = instances.iter().find(|i| &i.name == instance_name);
            AggregateRow {
                algorithm: algorithm.clone(),
                instance: instance_name.clone(),
                vertex_count: shape.map_or(0, |i| i.app.vertex_count()),
                machine_count: shape.map_or(0, |i| i.machines.machine_count()),
                best_cost,
                avg_cost,
                mean_wall_time_ms: mean_wall,
                all_feasible: cell.iter().all(|r| r.feasible),
            }
        })
        .collect()
}

pub const RESULTS_FILE: &str = "results.csv";
const CSV_HEADER: &str = "algorithm,instance,V,Mn,seed,best_cost,avg_cost,wall_time_ms,feasible";

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn trace_file_name(algorithm: &str, instance: &str, seed: u64) -> String {
    format!("trace_{algorithm}_{instance}_{seed}.csv")
}

/// Write `results.csv` (per-run rows, then aggregate rows sharing the same
/// columns) and one trace CSV per run into `out_dir`.
pub fn write_outputs(
    config: &ExperimentConfig,
    reports: &[RunReport],
    instances: &[Instance],
    out_dir: &Path,
) -> Result<(), ExperimentError> {
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let timing = |ms: f64| if config.record_timing { ms } else { 0.0 };

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in reports {
        let shape = instances.iter().find(|i| i.name == r.instance);
        let (v, m) = shape.map_or((0, 0), |i| {
            (i.app.vertex_count(), i.machines.machine_count())
        });
        csv.push_str(&format!(
            "{},{},{},{},{},{},,{},{}\n",
            r.algorithm,
            r.instance,
            v,
            m,
            r.seed,
            fmt_opt(r.best_cost),
            timing(r.wall_time_ms),
            r.feasible
        ));
    }
    for row in aggregate(reports, instances) {
        csv.push_str(&format!(
            "{},{},{},{},,{},{},{},{}\n",
            row.algorithm,
            row.instance,
            row.vertex_count,
            row.machine_count,
            fmt_opt(row.best_cost),
            fmt_opt(row.avg_cost),
            timing(row.mean_wall_time_ms),
            row.all_feasible
        ));
    }
    let results_path = out_dir.join(RESULTS_FILE);
    fs::write(&results_path, csv).map_err(|e| io_err(&results_path, e))?;

    for r in reports {
        let mut body =
            String::from("generation,best_cost,mean_cost,restart_fired,twin_removal_fired\n");
        for t in &r.trace {
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                t.generation, t.best_cost, t.mean_cost, t.restart_fired, t.twin_removal_fired
            ));
        }
        let path = out_dir.join(trace_file_name(&r.algorithm, &r.instance, r.seed));
        fs::write(&path, body).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

/// Convenience wrapper: run the matrix and write all outputs.
pub fn run_and_write(
    config: &ExperimentConfig,
    instances: &[Instance],
    out_dir: &Path,
) -> Result<Vec<RunReport>, ExperimentError> {
    let reports = run_experiment(config, instances)?;
    write_outputs(config, &reports, instances, out_dir)?;
    Ok(reports)
}

#[derive(Debug, Clone)]
struct RunKey {
    algorithm: String,
    instance: String,
    seed: u64,
}

fn parse_results_runs(out_dir: &Path) -> Result<Vec<RunKey>, ExperimentError> {
    let path = out_dir.join(RESULTS_FILE);
    let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    let mut runs = Vec::new();
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 9 {
            continue;
        }
        // Per-run rows carry a seed; aggregate rows leave it empty.
        if let Ok(seed) = fields[4].parse::<u64>() {
            runs.push(RunKey {
                algorithm: fields[0].to_string(),
                instance: fields[1].to_string(),
                seed,
            });
        }
    }
    if runs.is_empty() {
        return Err(ExperimentError::EmptyResults(path));
    }
    Ok(runs)
}

fn read_trace_best(path: &Path) -> Result<Vec<f64>, ExperimentError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    Ok(text
        .lines()
        .skip(1)
        .filter_map(|line| line.split(',').nth(1).and_then(|f| f.parse().ok()))
        .collect())
}

/// Export plot-ready convergence series from a completed experiment
/// directory: for each instance, one series per algorithm holding the
/// per-generation median best cost across repetitions, as `(x, y, series)`
/// CSV rows, plus a log10 companion file (zero costs leave the y cell empty).
/// Every run listed in `results.csv` must have its trace file present.
pub fn export_traces(out_dir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
    let runs = parse_results_runs(out_dir)?;
    let missing: Vec<String> = runs
        .iter()
        .filter_map(|r| {
            let name = trace_file_name(&r.algorithm, &r.instance, r.seed);
            (!out_dir.join(&name).exists()).then_some(name)
        })
        .collect();
    if !missing.is_empty() {
        return Err(ExperimentError::MissingTraces(missing));
    }

    let mut instances: Vec<String> = runs.iter().map(|r| r.instance.clone()).collect();
    instances.sort();
    instances.dedup();

    let mut written = Vec::new();
    for instance in &instances {
        let mut algorithms: Vec<String> = runs
            .iter()
            .filter(|r| &r.instance == instance)
            .map(|r| r.algorithm.clone())
            .collect();
        algorithms.sort();
        algorithms.dedup();

        let mut linear = String::from("x,y,series\n");
        let mut log = String::from("x,y,series\n");
        for algorithm in &algorithms {
            let traces: Vec<Vec<f64>> = runs
                .iter()
                .filter(|r| &r.instance == instance && &r.algorithm == algorithm)
                .map(|r| {
                    read_trace_best(&out_dir.join(trace_file_name(
                        &r.algorithm,
                        &r.instance,
                        r.seed,
                    )))
                })
                .collect::<Result<_, _>>()?;
            let length = traces.iter().map(Vec::len).min().unwrap_or(0);
            for x in 0..length {
                let mut column: Vec<f64> = traces.iter().map(|t| t[x]).collect();
                column.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let median = if column.len() % 2 == 1 {
                    column[column.len() / 2]
                } else {
                    0.5 * (column[column.len() / 2 - 1] + column[column.len() / 2])
                };
                linear.push_str(&format!("{},{},{}\n", x + 1, median, algorithm));
                if median > 0.0 {
                    log.push_str(&format!("{},{},{}\n", x + 1, median.log10(), algorithm));
                } else {
                    log.push_str(&format!("{},,{}\n", x + 1, algorithm));
                }
            }
        }
        let linear_path = out_dir.join(format!("series_{instance}.csv"));
        fs::write(&linear_path, linear).map_err(|e| io_err(&linear_path, e))?;
        let log_path = out_dir.join(format!("series_log_{instance}.csv"));
        fs::write(&log_path, log).map_err(|e| io_err(&log_path, e))?;
        written.push(linear_path);
        written.push(log_path);
    }
    Ok(written)
}

/// Generate the ladder of instances for a generation spec and write them as
/// JSON files named after the instance. Returns (path, instance) pairs in
/// ladder order.
pub fn generate_and_write(
    sizes: &[usize],
    seed_base: u64,
    out_dir: &Path,
) -> Result<Vec<(PathBuf, Instance)>, ExperimentError> {
    use crate::generator::{generate_instance, GenParams};
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let mut out = Vec::with_capacity(sizes.len());
    for (index, &size) in sizes.iter().enumerate() {
        let params = GenParams::sized(size, seed_base + index as u64);
        let instance = generate_instance(&params);
        let path = out_dir.join(format!("{}.json", instance.name));
        fs::write(&path, instance.to_json()).map_err(|e| io_err(&path, e))?;
        out.push((path, instance));
    }
    Ok(out)
}
