//! Simulated-annealing baseline with feasibility repair: proposals that would
//! overload a machine are replaced by random feasible moves under the same
//! Metropolis rule, so no infeasible state is ever occupied.

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::assignment::Assignment;
use crate::ga::{feasible_random_assignment, GaParams, SearchRng};
use crate::graph::Instance;
use crate::report::{RunReport, TraceRecord};

pub const ALGORITHM_SA: &str = "sa";

/// SA tunables. `None` fields auto-resolve at run start: the initial
/// temperature tunes to the mean |delta| of 100 random feasible moves from
/// the initial state, moves per epoch default to 10·V, and the epoch count
/// matches the GA's evaluation budget (population × generations) so the two
/// solvers compare at equal work.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SaParams {
    pub initial_temperature: Option<f64>,
    /// Geometric schedule: T_{e+1} = cooling_rate * T_e.
    pub cooling_rate: f64,
    pub epochs: Option<usize>,
    pub moves_per_epoch: Option<usize>,
    pub rng_seed: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self {
            initial_temperature: None,
            cooling_rate: 0.95,
            epochs: None,
            moves_per_epoch: None,
            rng_seed: 0,
        }
    }
}

impl SaParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    /// Epoch count that matches a GA evaluation budget for `vertex_count`.
    pub fn matched_budget(vertex_count: usize, ga: &GaParams) -> Self {
        let evaluations = ga.population_size * ga.max_generations;
        let moves = 10 * vertex_count;
        Self {
            epochs: Some(evaluations.div_ceil(moves).max(1)),
            moves_per_epoch: Some(moves),
            ..Self::default()
        }
    }

    fn resolve(&self, vertex_count: usize) -> (usize, usize) {
        let moves = self.moves_per_epoch.unwrap_or(10 * vertex_count).max(1);
        let epochs = self.epochs.unwrap_or_else(|| {
            let ga = GaParams::for_vertex_count(vertex_count);
            (ga.population_size * ga.max_generations)
                .div_ceil(moves)
                .max(1)
        });
        (epochs, moves)
    }
}

/// Uniform single-vertex reassignment: a uniform vertex and a uniform machine
/// different from its current one. Callers must ensure at least two machines
/// exist.
pub fn propose_move(
    assignment: &Assignment,
    instance: &Instance,
    rng: &mut SearchRng,
) -> (usize, usize) {
    let v = instance.app.vertex_count();
    let m = instance.machines.machine_count();
    debug_assert!(m >= 2, "no move exists with a single machine");
    let vertex = rng.random_range(0..v);
    let mut machine = rng.random_range(0..m - 1);
    if machine >= assignment.gene(vertex) {
        machine += 1;
    }
    (vertex, machine)
}

/// Feasible proposals pass through unchanged; an infeasible proposal is
/// replaced by a uniformly drawn feasible move, retried up to V·Mn times.
/// `None` means no feasible substitute was found and the step becomes a
/// no-op.
pub fn repair_move(
    assignment: &Assignment,
    proposal: (usize, usize),
    instance: &Instance,
    rng: &mut SearchRng,
) -> Option<(usize, usize)> {
    if assignment.move_fits(&instance.app, &instance.machines, proposal.0, proposal.1) {
        return Some(proposal);
    }
    let v = instance.app.vertex_count();
    let m = instance.machines.machine_count();
    for _ in 0..v * m {
        let (vertex, machine) = propose_move(assignment, instance, rng);
        if assignment.move_fits(&instance.app, &instance.machines, vertex, machine) {
            return Some((vertex, machine));
        }
    }
    None
}

/// Mean |delta| over 100 random feasible moves from the initial state; falls
/// back to 1.0 when no informative move exists (single machine, or an
/// all-zero cost landscape).
fn tune_initial_temperature(
    assignment: &Assignment,
    instance: &Instance,
    rng: &mut SearchRng,
) -> f64 {
    let v = instance.app.vertex_count();
    let m = instance.machines.machine_count();
    if m < 2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut found = 0usize;
    for _ in 0..100 * v * m {
        if found == 100 {
            break;
        }
        let (vertex, machine) = propose_move(assignment, instance, rng);
        if assignment.move_fits(&instance.app, &instance.machines, vertex, machine) {
            sum += assignment
                .delta_cost(&instance.app, &instance.machines, vertex, machine)
                .abs();
            found += 1;
        }
    }
    if found == 0 || sum == 0.0 {
        1.0
    } else {
        sum / found as f64
    }
}

/// Run the repaired SA to its epoch budget.
pub fn run_sa(instance: &Instance, params: &SaParams) -> RunReport {
    run_sa_observed(instance, params, |_, _| {})
}

/// Same as [`run_sa`] with a per-step hook over the occupied state.
pub fn run_sa_observed(
    instance: &Instance,
    params: &SaParams,
    mut observer: impl FnMut(u64, &Assignment),
) -> RunReport {
    let start = Instant::now();
    let mut rng = SearchRng::seed_from_u64(params.rng_seed);
    let app = &instance.app;
    let machines = &instance.machines;
    let v = app.vertex_count();
    let m = machines.machine_count();
    let (epochs, moves_per_epoch) = params.resolve(v);

    let mut current = match feasible_random_assignment(instance, 100 * m, 200, &mut rng) {
        Ok(a) => a,
        Err(_) => {
            return RunReport::infeasible(
                ALGORITHM_SA,
                &instance.name,
                params.rng_seed,
                start.elapsed().as_secs_f64() * 1e3,
            );
        }
    };
    let mut best = current.clone();
    let mut temperature = params
        .initial_temperature
        .unwrap_or_else(|| tune_initial_temperature(&current, instance, &mut rng));
    let mut repairs = 0u64;
    let mut trace = Vec::with_capacity(epochs);
    let mut step = 0u64;

    for epoch in 1..=epochs {
        if m >= 2 {
            for _ in 0..moves_per_epoch {
                step += 1;
                let proposal = propose_move(&current, instance, &mut rng);
                if !current.move_fits(app, machines, proposal.0, proposal.1) {
                    repairs += 1;
                }
                let Some((vertex, machine)) = repair_move(&current, proposal, instance, &mut rng)
                else {
                    observer(step, &current);
                    continue; // no feasible substitute: no-op step
                };
                let delta = current.delta_cost(app, machines, vertex, machine);
                let accept = delta <= 0.0 || rng.random::<f64>() < (-delta / temperature).exp();
                if accept {
                    current.apply_move(app, machines, vertex, machine);
                    if current.cost() < best.cost() {
                        best = current.clone();
                    }
                }
                observer(step, &current);
            }
        }
        trace.push(TraceRecord {
            generation: epoch,
            best_cost: best.cost(),
            mean_cost: current.cost(),
            restart_fired: false,
            twin_removal_fired: false,
        });
        temperature *= params.cooling_rate;
    }

    best.recompute(app, machines);
    RunReport {
        algorithm: ALGORITHM_SA.to_string(),
        instance: instance.name.clone(),
        seed: params.rng_seed,
        best_cost: Some(best.cost()),
        best_genes: Some(best.genes().to_vec()),
        feasible: true,
        generations_or_epochs: epochs,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        repairs,
        trace,
    }
}
