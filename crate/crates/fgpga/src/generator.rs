//! Random benchmark-instance generation: sparse power-law application graphs
//! with exponential weights, and capacity-sized heterogeneous machine fleets
//! whose sparse link topology is densified by all-pairs shortest paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

use crate::graph::{ApplicationGraph, Instance, MachineGraph};

/// All generator tunables.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenParams {
    pub vertex_count: usize,
    /// Rate of the exponential demand distribution (mean 1/lambda = 10).
    pub vertex_weight_lambda: f64,
    /// Rate of the exponential edge-weight distribution (mean 200).
    pub edge_weight_lambda: f64,
    /// Fleet capacity is grown until it covers this multiple of total demand.
    pub capacity_headroom: f64,
    pub capacity_choices: Vec<f64>,
    /// Rate of the exponential machine-link-weight distribution.
    pub machine_link_lambda: f64,
    /// Nominal degree-tail exponent; the attachment process approximates this
    /// at the default edge factor rather than taking it as an active knob.
    pub power_law_exponent: f64,
    /// Edge budget as a multiple of the vertex count.
    pub target_edge_factor: f64,
    pub rng_seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            vertex_count: 100,
            vertex_weight_lambda: 0.1,
            edge_weight_lambda: 0.005,
            capacity_headroom: 1.5,
            capacity_choices: (1..=8).map(|k| 100.0 * k as f64).collect(),
            machine_link_lambda: 0.005,
            power_law_exponent: 2.5,
            target_edge_factor: 2.0,
            rng_seed: 0,
        }
    }
}

impl GenParams {
    pub fn sized(vertex_count: usize, rng_seed: u64) -> Self {
        Self {
            vertex_count,
            rng_seed,
            ..Self::default()
        }
    }
}

/// Inverse-CDF exponential draw, `-ln(u)/lambda` with `u` in (0, 1].
fn exp_sample(rng: &mut ChaCha8Rng, lambda: f64) -> f64 {
    let u = 1.0 - rng.random::<f64>();
    -u.ln() / lambda
}

/// Exponential draw guaranteed strictly positive (redraws the measure-zero
/// `u = 1` outcome).
fn exp_sample_positive(rng: &mut ChaCha8Rng, lambda: f64) -> f64 {
    loop {
        let w = exp_sample(rng, lambda);
        if w > 0.0 {
            return w;
        }
    }
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

/// Sparse connected graph grown in the repeated-attachment style: start from
/// a small clique, then either attach a fresh vertex to an endpoint of a
/// uniformly random existing edge (degree-preferential) or add such an edge
/// between existing vertices, interleaved so the edge budget lands near
/// `target_edge_factor * V`. Demands and edge weights come from the
/// exponential distributions above; demands are rounded to 3 decimals and
/// redrawn while they exceed the largest capacity choice.
pub fn generate_application_graph(params: &GenParams, rng: &mut ChaCha8Rng) -> ApplicationGraph {
    let v = params.vertex_count;
    assert!(v >= 2, "vertex_count must be at least 2");
    let max_edges = v * (v - 1) / 2;
    let target_edges = ((params.target_edge_factor * v as f64).round() as usize)
        .clamp(v.saturating_sub(1), max_edges);

    let clique = v.min(3);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(target_edges);
    let mut present: HashSet<(usize, usize)> = HashSet::with_capacity(target_edges);
    for i in 0..clique {
        for j in (i + 1)..clique {
            edges.push((i, j));
            present.insert((i, j));
        }
    }
    let mut vertices = clique;

    // Random endpoint of a uniformly random edge: degree-proportional choice.
    let preferential = |edges: &[(usize, usize)], rng: &mut ChaCha8Rng| -> usize {
        let (a, b) = edges[rng.random_range(0..edges.len())];
        if rng.random::<bool>() {
            a
        } else {
            b
        }
    };

    while vertices < v || edges.len() < target_edges {
        let vertices_left = v - vertices;
        // Reserve one edge of the budget per pending vertex so growth never
        // overshoots the target.
        let edges_left = (target_edges - vertices_left).saturating_sub(edges.len());
        let mut grow = vertices_left > 0
            && (edges_left == 0
                || rng.random_range(0..(vertices_left + edges_left)) < vertices_left);
        if !grow {
            let mut added = false;
            for _ in 0..50 {
                let a = preferential(&edges, rng);
                let b = preferential(&edges, rng);
                if a == b {
                    continue;
                }
                let key = (a.min(b), a.max(b));
                if present.insert(key) {
                    edges.push(key);
                    added = true;
                    break;
                }
            }
            if !added {
                // Preferential draws keep colliding; fall back to a uniform
                // pair so dense corners still make progress.
                for _ in 0..200 {
                    let a = rng.random_range(0..vertices);
                    let b = rng.random_range(0..vertices);
                    if a == b {
                        continue;
                    }
                    let key = (a.min(b), a.max(b));
                    if present.insert(key) {
                        edges.push(key);
                        added = true;
                        break;
                    }
                }
            }
            if !added {
                if vertices_left > 0 {
                    grow = true; // current vertex set is saturated; keep growing
                } else {
                    break; // graph is complete
                }
            }
        }
        if grow {
            let anchor = preferential(&edges, rng);
            let fresh = vertices;
            vertices += 1;
            let key = (anchor.min(fresh), anchor.max(fresh));
            edges.push(key);
            present.insert(key);
        }
    }

    let max_choice = params
        .capacity_choices
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let demands: Vec<f64> = (0..v)
        .map(|_| loop {
            let d = round3(exp_sample(rng, params.vertex_weight_lambda));
            if d <= max_choice {
                break d;
            }
        })
        .collect();

    let weighted: Vec<(usize, usize, f64)> = edges
        .into_iter()
        .map(|(i, j)| (i, j, exp_sample_positive(rng, params.edge_weight_lambda)))
        .collect();

    ApplicationGraph::new(demands, weighted).expect("generated application graph is valid")
}

/// Draw machine capacities uniformly from `capacity_choices` until the fleet
/// covers `capacity_headroom` times the application's total demand (plus one
/// machine able to host the largest single component, if the draw missed
/// one), then connect the fleet by a random tree plus `ceil(Mn/2)` extra
/// random links and densify link costs by all-pairs shortest paths.
pub fn generate_machine_graph(
    app: &ApplicationGraph,
    params: &GenParams,
    rng: &mut ChaCha8Rng,
) -> MachineGraph {
    let required = params.capacity_headroom * app.total_demand();
    let choices = &params.capacity_choices;
    let mut capacities: Vec<f64> = Vec::new();
    let mut total = 0.0;
    while total < required {
        let c = choices[rng.random_range(0..choices.len())];
        capacities.push(c);
        total += c;
    }
    let max_demand = app.demands().iter().cloned().fold(0.0, f64::max);
    let max_cap = capacities.iter().cloned().fold(0.0, f64::max);
    if max_cap < max_demand {
        let mut sorted = choices.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let fit = sorted
            .iter()
            .cloned()
            .find(|&c| c >= max_demand)
            .expect("demands are redrawn below the largest capacity choice");
        capacities.push(fit);
    }

    let m = capacities.len();
    let mut dist = vec![vec![f64::INFINITY; m]; m];
    for (k, row) in dist.iter_mut().enumerate() {
        row[k] = 0.0;
    }
    let connect = |dist: &mut [Vec<f64>], a: usize, b: usize, w: f64| {
        if w < dist[a][b] {
            dist[a][b] = w;
            dist[b][a] = w;
        }
    };
    for v in 1..m {
        let parent = rng.random_range(0..v);
        let w = exp_sample_positive(rng, params.machine_link_lambda);
        connect(&mut dist, parent, v, w);
    }
    let extras = m.div_ceil(2);
    let mut added = 0;
    let mut attempts = 0;
    while added < extras && attempts < 20 * extras.max(1) {
        attempts += 1;
        if m < 2 {
            break;
        }
        let a = rng.random_range(0..m);
        let b = rng.random_range(0..m);
        if a == b || dist[a][b].is_finite() {
            continue;
        }
        let w = exp_sample_positive(rng, params.machine_link_lambda);
        connect(&mut dist, a, b, w);
        added += 1;
    }

    // Floyd-Warshall closure: every machine pair gets its routed cost.
    for mid in 0..m {
        for a in 0..m {
            for b in 0..m {
                let via = dist[a][mid] + dist[mid][b];
                if via < dist[a][b] {
                    dist[a][b] = via;
                }
            }
        }
    }

    MachineGraph::new(capacities, dist).expect("generated machine graph is valid")
}

/// Deterministic composition of the two generators under `params.rng_seed`.
pub fn generate_instance(params: &GenParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let app = generate_application_graph(params, &mut rng);
    let machines = generate_machine_graph(&app, params, &mut rng);
    let name = format!("v{:04}-s{}", params.vertex_count, params.rng_seed);
    Instance::new(name, app, machines)
}
