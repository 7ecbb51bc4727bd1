//! Run outputs: per-generation (or per-epoch) traces and the seeded run
//! report shared by both solvers.

use serde::{Deserialize, Serialize};

/// One trace record per generation (GA) or epoch (SA).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub generation: usize,
    /// Best cost seen so far; non-increasing under elitism.
    pub best_cost: f64,
    /// Mean cost over the population (GA) or the current state's cost (SA).
    pub mean_cost: f64,
    pub restart_fired: bool,
    pub twin_removal_fired: bool,
}

/// Output of one seeded solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub instance: String,
    pub seed: u64,
    /// `None` when randomized initialization could not find any feasible
    /// assignment (reported, never guessed).
    pub best_cost: Option<f64>,
    pub best_genes: Option<Vec<usize>>,
    pub feasible: bool,
    pub generations_or_epochs: usize,
    pub wall_time_ms: f64,
    /// How often the SA repair path replaced an infeasible proposal; always 0
    /// for GA runs.
    pub repairs: u64,
    pub trace: Vec<TraceRecord>,
}

impl RunReport {
    pub fn infeasible(algorithm: &str, instance: &str, seed: u64, wall_time_ms: f64) -> Self {
        Self {
            algorithm: algorithm.to_string(),
            instance: instance.to_string(),
            seed,
            best_cost: None,
            best_genes: None,
            feasible: false,
            generations_or_epochs: 0,
            wall_time_ms,
            repairs: 0,
            trace: Vec::new(),
        }
    }
}
