//! The feasibility-preserving genetic algorithm: every individual in every
//! generation satisfies the capacity constraint. Feasible random
//! initialization, tournament selection, feasible one-point crossover,
//! greedy/random mutation, elitism, periodic twin removal and stagnation
//! restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

use crate::assignment::Assignment;
use crate::graph::Instance;
use crate::report::{RunReport, TraceRecord};

/// The seedable generator every stochastic decision flows from.
pub type SearchRng = ChaCha8Rng;

pub const ALGORITHM_FGPGA: &str = "fgpga";
pub const ALGORITHM_FGPGA_NO_GREEDY: &str = "fgpga-no-greedy";

/// All GA tunables with their stock values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaParams {
    pub population_size: usize,
    pub max_generations: usize,
    /// Genotype match fraction at or above which two individuals are twins.
    pub similarity_threshold: f64,
    /// Width of the stagnation window, and the cooldown between restarts.
    pub random_restart_interval: usize,
    pub twin_removal_interval: usize,
    pub tournament_size: usize,
    /// Probability that a new individual is mutated greedily rather than
    /// randomly; 0 gives the random-mutation-only ablation variant.
    pub greedy_mutation_rate: f64,
    /// Relative best-cost improvement at or below which the window counts as
    /// stagnant.
    pub improvement_threshold: f64,
    /// Fraction of the population reinitialized on restart.
    pub restart_fraction: f64,
    /// Machine draws per gene during initialization; `None` = 100 per machine.
    pub init_attempt_limit: Option<usize>,
    pub rng_seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 20,
            max_generations: 6000,
            similarity_threshold: 0.95,
            random_restart_interval: 50,
            twin_removal_interval: 100,
            tournament_size: 5,
            greedy_mutation_rate: 0.8,
            improvement_threshold: 0.001,
            restart_fraction: 0.5,
            init_attempt_limit: None,
            rng_seed: 0,
        }
    }
}

impl GaParams {
    /// Stock generation budget: 6000 generations up to 500 vertices, 3000
    /// beyond.
    pub fn for_vertex_count(vertex_count: usize) -> Self {
        Self {
            max_generations: if vertex_count <= 500 { 6000 } else { 3000 },
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn algorithm_label(&self) -> &'static str {
        if self.greedy_mutation_rate == 0.0 {
            ALGORITHM_FGPGA_NO_GREEDY
        } else {
            ALGORITHM_FGPGA
        }
    }
}

/// Randomized initialization could not place a feasible individual within its
/// attempt budget. Distinct from proven infeasibility: the instance may still
/// admit feasible assignments this sampler cannot reach.
#[derive(Debug, Error)]
#[error("randomized initialization exhausted its attempt budget without a feasible individual")]
pub struct InitExhausted;

/// The current generation: all individuals feasible, plus the best feasible
/// assignment ever observed (kept outside the individual list, so no operator
/// can lose it).
#[derive(Debug, Clone)]
pub struct Population {
    pub individuals: Vec<Assignment>,
    pub global_best: Assignment,
}

/// One feasible random individual: genes are drawn in index order, each from
/// uniform machine draws accepted only when the remaining capacity fits the
/// component. Loads accumulate in the same index order the caches use, so the
/// result is feasible by construction, exactly.
pub fn initialize_individual(
    instance: &Instance,
    params: &GaParams,
    rng: &mut SearchRng,
) -> Result<Assignment, InitExhausted> {
    let m = instance.machines.machine_count();
    let per_gene_limit = params.init_attempt_limit.unwrap_or(100 * m);
    feasible_random_assignment(instance, per_gene_limit, params.population_size * 10, rng)
}

pub(crate) fn feasible_random_assignment(
    instance: &Instance,
    per_gene_limit: usize,
    max_individual_attempts: usize,
    rng: &mut SearchRng,
) -> Result<Assignment, InitExhausted> {
    let app = &instance.app;
    let machines = &instance.machines;
    let v = app.vertex_count();
    let m = machines.machine_count();
    'individual: for _ in 0..max_individual_attempts {
        let mut genes = vec![0usize; v];
        let mut loads = vec![0.0; m];
        for (i, gene) in genes.iter_mut().enumerate() {
            let demand = app.demand(i);
            let mut placed = false;
            for _ in 0..per_gene_limit {
                let candidate = rng.random_range(0..m);
                if loads[candidate] + demand <= machines.capacity(candidate) {
                    *gene = candidate;
                    loads[candidate] += demand;
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'individual;
            }
        }
        return Ok(Assignment::new(app, machines, genes));
    }
    Err(InitExhausted)
}

/// Two parents from two independent tournaments. Each tournament draws
/// `k` distinct individuals uniformly and keeps the cheapest (first drawn on
/// ties). Returns indices into `population.individuals`.
pub fn tournament_select(population: &Population, k: usize, rng: &mut SearchRng) -> (usize, usize) {
    assert!(
        k <= population.individuals.len(),
        "tournament size {k} exceeds population size {}",
        population.individuals.len()
    );
    let run = |rng: &mut SearchRng| -> usize {
        let drawn = rand::seq::index::sample(rng, population.individuals.len(), k);
        let mut winner = drawn.index(0);
        for idx in drawn.iter().skip(1) {
            if population.individuals[idx].cost() < population.individuals[winner].cost() {
                winner = idx;
            }
        }
        winner
    };
    (run(rng), run(rng))
}

/// One-point crossover of two genotypes at cut `k`: the first child takes
/// parent 1 up to `k` and parent 2 from there, the second is symmetric.
pub fn cross_at(parent1: &[usize], parent2: &[usize], k: usize) -> (Vec<usize>, Vec<usize>) {
    let mut c1 = parent1[..k].to_vec();
    c1.extend_from_slice(&parent2[k..]);
    let mut c2 = parent2[..k].to_vec();
    c2.extend_from_slice(&parent1[k..]);
    (c1, c2)
}

/// Feasible one-point crossover: random cut points are tried until at least
/// one child is feasible, up to V attempts; the feasible children found at the
/// first workable cut are returned. Empty means every attempt failed and the
/// caller falls back to different parents.
pub fn crossover(
    parent1: &Assignment,
    parent2: &Assignment,
    instance: &Instance,
    rng: &mut SearchRng,
) -> Vec<Assignment> {
    let app = &instance.app;
    let machines = &instance.machines;
    let v = app.vertex_count();
    if v < 2 {
        // No interior cut exists; the only offspring are the parents.
        return vec![parent1.clone(), parent2.clone()];
    }
    for _ in 0..v {
        let k = rng.random_range(1..v);
        let (g1, g2) = cross_at(parent1.genes(), parent2.genes(), k);
        // Cheap capacity screen first; build the cost cache only for keepers.
        let feasible1 = crate::graph::is_feasible(app, machines, &g1);
        let feasible2 = crate::graph::is_feasible(app, machines, &g2);
        if feasible1 || feasible2 {
            let mut out = Vec::with_capacity(2);
            if feasible1 {
                out.push(Assignment::new(app, machines, g1));
            }
            if feasible2 {
                out.push(Assignment::new(app, machines, g2));
            }
            return out;
        }
    }
    Vec::new()
}

/// Greedy mutation: sweep every gene in index order; each gene is set to the
/// feasible machine value minimizing the resulting cost, evaluated
/// incrementally over incident edges (lowest machine index on ties). The
/// current value always qualifies, so no per-gene step ever worsens the
/// individual and the result stays feasible. This is the expensive operator
/// the greedy-mutation-rate coin decides on.
pub fn greedy_mutate(assignment: &mut Assignment, instance: &Instance, _rng: &mut SearchRng) {
    let app = &instance.app;
    let machines = &instance.machines;
    let v = app.vertex_count();
    let m = machines.machine_count();
    for pos in 0..v {
        let mut best: Option<(f64, usize)> = None;
        for candidate in 0..m {
            if !assignment.move_fits(app, machines, pos, candidate) {
                continue;
            }
            let delta = assignment.delta_cost(app, machines, pos, candidate);
            if best.is_none_or(|(d, _)| delta < d) {
                best = Some((delta, candidate));
            }
        }
        if let Some((_, target)) = best {
            assignment.apply_move(app, machines, pos, target);
        }
    }
}

/// Random mutation: a random gene takes the first uniformly drawn machine
/// value that keeps the assignment feasible, falling back across up to V
/// positions (Mn draws per position).
pub fn random_mutate(assignment: &mut Assignment, instance: &Instance, rng: &mut SearchRng) {
    let app = &instance.app;
    let machines = &instance.machines;
    let v = app.vertex_count();
    let m = machines.machine_count();
    let order = rand::seq::index::sample(rng, v, v);
    for pos in order {
        for _ in 0..m {
            let candidate = rng.random_range(0..m);
            if assignment.move_fits(app, machines, pos, candidate) {
                assignment.apply_move(app, machines, pos, candidate);
                return;
            }
        }
    }
}

/// Fraction of gene positions where the two genotypes agree.
pub fn similarity(x1: &Assignment, x2: &Assignment) -> f64 {
    assert_eq!(
        x1.genes().len(),
        x2.genes().len(),
        "genotype length mismatch"
    );
    let matches = x1
        .genes()
        .iter()
        .zip(x2.genes())
        .filter(|(a, b)| a == b)
        .count();
    matches as f64 / x1.genes().len() as f64
}

/// Sweep all unordered pairs; whenever a pair is at or above the similarity
/// threshold, the later individual is reinitialized. Slot 0 (the elite copy)
/// is never replaced, and the tracked global best lives outside the list, so
/// it can never be lost here. A reinitialization draw that fails keeps the
/// old individual.
pub fn twin_removal(
    population: &mut Population,
    instance: &Instance,
    params: &GaParams,
    rng: &mut SearchRng,
) {
    let n = population.individuals.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let alike = similarity(&population.individuals[i], &population.individuals[j]);
            if alike >= params.similarity_threshold {
                if let Ok(fresh) = initialize_individual(instance, params, rng) {
                    population.individuals[j] = fresh;
                }
            }
        }
    }
}

/// Reinitialize the `ceil(restart_fraction * n)` worst individuals, never
/// touching the single cheapest one. Failing draws keep the old individual.
pub fn random_restart(
    population: &mut Population,
    instance: &Instance,
    params: &GaParams,
    rng: &mut SearchRng,
) {
    let n = population.individuals.len();
    let count = (params.restart_fraction * n as f64).ceil() as usize;
    let best_index = cheapest_index(&population.individuals);
    let mut ranked: Vec<usize> = (0..n).filter(|&i| i != best_index).collect();
    ranked.sort_by(|&a, &b| {
        population.individuals[b]
            .cost()
            .partial_cmp(&population.individuals[a].cost())
            .unwrap()
            .then(a.cmp(&b))
    });
    for &idx in ranked.iter().take(count) {
        if let Ok(fresh) = initialize_individual(instance, params, rng) {
            population.individuals[idx] = fresh;
        }
    }
}

fn cheapest_index(individuals: &[Assignment]) -> usize {
    let mut best = 0;
    for (i, a) in individuals.iter().enumerate().skip(1) {
        if a.cost() < individuals[best].cost() {
            best = i;
        }
    }
    best
}

/// Run the GA to its generation budget and report the best feasible
/// assignment found, with the full per-generation trace.
pub fn run_fgpga(instance: &Instance, params: &GaParams) -> RunReport {
    run_fgpga_observed(instance, params, |_, _| {})
}

/// Same as [`run_fgpga`] with a per-generation hook (generation 0 is the
/// initial population); used to instrument feasibility closure.
pub fn run_fgpga_observed(
    instance: &Instance,
    params: &GaParams,
    mut observer: impl FnMut(usize, &Population),
) -> RunReport {
    let start = Instant::now();
    let mut rng = SearchRng::seed_from_u64(params.rng_seed);
    let app = &instance.app;
    let machines = &instance.machines;
    let n = params.population_size;

    let mut individuals = Vec::with_capacity(n);
    for _ in 0..n {
        match initialize_individual(instance, params, &mut rng) {
            Ok(a) => individuals.push(a),
            Err(InitExhausted) => {
                return RunReport::infeasible(
                    params.algorithm_label(),
                    &instance.name,
                    params.rng_seed,
                    start.elapsed().as_secs_f64() * 1e3,
                );
            }
        }
    }
    let global_best = individuals[cheapest_index(&individuals)].clone();
    let mut population = Population {
        individuals,
        global_best,
    };
    observer(0, &population);

    let mut trace: Vec<TraceRecord> = Vec::with_capacity(params.max_generations);
    let mut last_restart = 0usize;

    for generation in 1..=params.max_generations {
        let mut next = Vec::with_capacity(n);
        next.push(population.global_best.clone()); // elite, mutation-exempt
        while next.len() < n {
            let mut child = None;
            let mut fallback_pair = (0usize, 0usize);
            for _ in 0..n {
                let (p1, p2) = tournament_select(&population, params.tournament_size, &mut rng);
                fallback_pair = (p1, p2);
                let kids = crossover(
                    &population.individuals[p1],
                    &population.individuals[p2],
                    instance,
                    &mut rng,
                );
                child = kids
                    .into_iter()
                    .reduce(|a, b| if b.cost() < a.cost() { b } else { a });
                if child.is_some() {
                    break;
                }
            }
            let mut child = child.unwrap_or_else(|| {
                // Every pairing failed to recombine feasibly; carry the
                // better parent of the last pairing unchanged.
                let (p1, p2) = fallback_pair;
                let a = &population.individuals[p1];
                let b = &population.individuals[p2];
                if b.cost() < a.cost() {
                    b.clone()
                } else {
                    a.clone()
                }
            });
            if rng.random::<f64>() < params.greedy_mutation_rate {
                greedy_mutate(&mut child, instance, &mut rng);
            } else {
                random_mutate(&mut child, instance, &mut rng);
            }
            next.push(child);
        }
        population.individuals = next;
        promote_global_best(&mut population);

        let twin_fired =
            params.twin_removal_interval > 0 && generation % params.twin_removal_interval == 0;
        if twin_fired {
            twin_removal(&mut population, instance, params, &mut rng);
        }

        let window = params.random_restart_interval;
        let mut restart_fired = false;
        if window > 0 && generation > window && generation - last_restart >= window {
            let then = trace[generation - window - 1].best_cost;
            let now = population.global_best.cost();
            let relative = (then - now) / then.max(1e-12);
            if relative <= params.improvement_threshold {
                random_restart(&mut population, instance, params, &mut rng);
                restart_fired = true;
                last_restart = generation;
            }
        }
        if twin_fired || restart_fired {
            promote_global_best(&mut population);
        }

        let mean = population
            .individuals
            .iter()
            .map(Assignment::cost)
            .sum::<f64>()
            / population.individuals.len() as f64;
        trace.push(TraceRecord {
            generation,
            best_cost: population.global_best.cost(),
            mean_cost: mean,
            restart_fired,
            twin_removal_fired: twin_fired,
        });
        observer(generation, &population);
    }

    let mut best = population.global_best;
    best.recompute(app, machines); // strip any incremental drift from the report
    RunReport {
        algorithm: params.algorithm_label().to_string(),
        instance: instance.name.clone(),
        seed: params.rng_seed,
        best_cost: Some(best.cost()),
        best_genes: Some(best.genes().to_vec()),
        feasible: true,
        generations_or_epochs: params.max_generations,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        repairs: 0,
        trace,
    }
}

/// Adopt the cheapest current individual as global best when strictly better.
fn promote_global_best(population: &mut Population) {
    let idx = cheapest_index(&population.individuals);
    if population.individuals[idx].cost() < population.global_best.cost() {
        population.global_best = population.individuals[idx].clone();
    }
}
