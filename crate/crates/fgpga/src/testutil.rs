//! Shared fixtures for the unit tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{ApplicationGraph, Instance, MachineGraph};

/// Two 6-unit components on two 10-unit machines: co-location is infeasible,
/// the split is forced.
pub fn forced_split() -> Instance {
    Instance::new(
        "forced-split",
        ApplicationGraph::new(vec![6.0, 6.0], vec![(0, 1, 5.0)]).unwrap(),
        MachineGraph::new(vec![10.0, 10.0], vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap(),
    )
}

/// Two light components on two roomy machines: every state feasible.
pub fn roomy_pair() -> Instance {
    Instance::new(
        "roomy-pair",
        ApplicationGraph::new(vec![1.0, 1.0], vec![(0, 1, 5.0)]).unwrap(),
        MachineGraph::new(vec![10.0, 10.0], vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap(),
    )
}

/// One machine that fits everything.
pub fn single_machine(vertices: usize) -> Instance {
    let demands = vec![1.0; vertices];
    let edges = (0..vertices - 1).map(|i| (i, i + 1, 2.0)).collect();
    Instance::new(
        "single-machine",
        ApplicationGraph::new(demands, edges).unwrap(),
        MachineGraph::new(vec![vertices as f64 + 1.0], vec![vec![0.0]]).unwrap(),
    )
}

/// Small random instance with mildly binding capacities; independent of the
/// benchmark generator so solver tests do not inherit its structure.
#[allow(clippy::needless_range_loop)]
pub fn tiny_random(vertices: usize, machines: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let demands: Vec<f64> = (0..vertices).map(|_| rng.random_range(1.0..4.0)).collect();
    let mut edges = Vec::new();
    for i in 0..vertices {
        for j in (i + 1)..vertices {
            if rng.random::<f64>() < 0.5 {
                edges.push((i, j, rng.random_range(0.5..9.0)));
            }
        }
    }
    if edges.is_empty() {
        edges.push((0, 1, 1.0));
    }
    let total: f64 = demands.iter().sum();
    // Mirrors the benchmark generator's proportions: each machine holds a
    // sizable fraction of the whole application, aggregate headroom >= 1.5.
    let capacities: Vec<f64> = (0..machines)
        .map(|_| rng.random_range(0.55..1.05) * total)
        .collect();
    let mut link = vec![vec![0.0; machines]; machines];
    for k in 0..machines {
        for l in (k + 1)..machines {
            let w = rng.random_range(0.5..4.0);
            link[k][l] = w;
            link[l][k] = w;
        }
    }
    Instance::new(
        format!("tiny-v{vertices}-m{machines}-s{seed}"),
        ApplicationGraph::new(demands, edges).unwrap(),
        MachineGraph::new(capacities, link).unwrap(),
    )
}
