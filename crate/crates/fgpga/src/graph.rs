//! Problem-instance types: a weighted application graph of software
//! components, a heterogeneous machine fleet with pairwise link costs, the
//! cut-size objective and the capacity feasibility predicate.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Validation failures when constructing or loading an instance.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("application graph needs at least one vertex")]
    NoVertices,
    #[error("machine graph needs at least one machine")]
    NoMachines,
    #[error("edge ({i}, {j}) violates 0 <= i < j < {vertices}")]
    EdgeOutOfRange { i: usize, j: usize, vertices: usize },
    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("edge ({i}, {j}) has invalid weight {weight} (must be finite and > 0)")]
    EdgeWeight { i: usize, j: usize, weight: f64 },
    #[error("vertex {vertex} has invalid demand {demand} (must be finite and >= 0)")]
    Demand { vertex: usize, demand: f64 },
    #[error("machine {machine} has invalid capacity {capacity} (must be finite and > 0)")]
    Capacity { machine: usize, capacity: f64 },
    #[error("link-cost matrix must be {machines}x{machines}")]
    LinkCostShape { machines: usize },
    #[error("link cost [{k}][{l}] = {value} invalid (finite, >= 0, symmetric, zero diagonal)")]
    LinkCost { k: usize, l: usize, value: f64 },
}

#[derive(Clone, Serialize, Deserialize)]
struct ApplicationGraphData {
    demands: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
}

/// Undirected weighted graph of deployable components. Vertex weights are
/// resource demands, edge weights are communication volumes. Edges are stored
/// once with `i < j`; a per-vertex adjacency index supports incremental cost
/// evaluation over incident edges only.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ApplicationGraphData", into = "ApplicationGraphData")]
pub struct ApplicationGraph {
    demands: Vec<f64>,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl ApplicationGraph {
    pub fn new(demands: Vec<f64>, edges: Vec<(usize, usize, f64)>) -> Result<Self, GraphError> {
        let v = demands.len();
        if v == 0 {
            return Err(GraphError::NoVertices);
        }
        for (vertex, &demand) in demands.iter().enumerate() {
            if !demand.is_finite() || demand < 0.0 {
                return Err(GraphError::Demand { vertex, demand });
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(i, j, weight) in &edges {
            if i >= j || j >= v {
                return Err(GraphError::EdgeOutOfRange { i, j, vertices: v });
            }
            if !seen.insert((i, j)) {
                return Err(GraphError::DuplicateEdge { i, j });
            }
            if !weight.is_finite() || weight <= 0.0 {
                return Err(GraphError::EdgeWeight { i, j, weight });
            }
        }
        let mut adjacency = vec![Vec::new(); v];
        for &(i, j, weight) in &edges {
            adjacency[i].push((j, weight));
            adjacency[j].push((i, weight));
        }
        Ok(Self {
            demands,
            edges,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.demands.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn demand(&self, vertex: usize) -> f64 {
        self.demands[vertex]
    }

    pub fn demands(&self) -> &[f64] {
        &self.demands
    }

    /// Edges as `(i, j, weight)` with `i < j`, each undirected edge once.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Neighbors of `vertex` with the connecting edge weight.
    pub fn neighbors(&self, vertex: usize) -> &[(usize, f64)] {
        &self.adjacency[vertex]
    }

    pub fn total_demand(&self) -> f64 {
        self.demands.iter().sum()
    }

    pub fn is_connected(&self) -> bool {
        let v = self.vertex_count();
        let mut seen = vec![false; v];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(w, _) in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == v
    }
}

impl TryFrom<ApplicationGraphData> for ApplicationGraph {
    type Error = GraphError;
    fn try_from(data: ApplicationGraphData) -> Result<Self, Self::Error> {
        Self::new(data.demands, data.edges)
    }
}

impl From<ApplicationGraph> for ApplicationGraphData {
    fn from(g: ApplicationGraph) -> Self {
        Self {
            demands: g.demands,
            edges: g.edges,
        }
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct MachineGraphData {
    capacities: Vec<f64>,
    link_cost: Vec<Vec<f64>>,
}

/// Heterogeneous machine fleet: per-machine capacities and a dense symmetric
/// matrix of pairwise communication costs with zero diagonal. Sparse machine
/// topologies are densified by all-pairs shortest paths before construction,
/// so every pair carries a finite routed cost.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MachineGraphData", into = "MachineGraphData")]
pub struct MachineGraph {
    capacities: Vec<f64>,
    link_cost: Vec<Vec<f64>>,
}

impl MachineGraph {
    #[allow(clippy::needless_range_loop)] // symmetric check reads [k][l] and [l][k]
    pub fn new(capacities: Vec<f64>, link_cost: Vec<Vec<f64>>) -> Result<Self, GraphError> {
        let m = capacities.len();
        if m == 0 {
            return Err(GraphError::NoMachines);
        }
        for (machine, &capacity) in capacities.iter().enumerate() {
            if !capacity.is_finite() || capacity <= 0.0 {
                return Err(GraphError::Capacity { machine, capacity });
            }
        }
        if link_cost.len() != m || link_cost.iter().any(|row| row.len() != m) {
            return Err(GraphError::LinkCostShape { machines: m });
        }
        for k in 0..m {
            for l in 0..m {
                let value = link_cost[k][l];
                let bad = !value.is_finite()
                    || value < 0.0
                    || (k == l && value != 0.0)
                    || link_cost[l][k] != value;
                if bad {
                    return Err(GraphError::LinkCost { k, l, value });
                }
            }
        }
        Ok(Self {
            capacities,
            link_cost,
        })
    }

    pub fn machine_count(&self) -> usize {
        self.capacities.len()
    }

    pub fn capacity(&self, machine: usize) -> f64 {
        self.capacities[machine]
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    /// Communication cost per unit of traffic between machines `k` and `l`.
    pub fn link_cost(&self, k: usize, l: usize) -> f64 {
        self.link_cost[k][l]
    }

    pub fn link_cost_matrix(&self) -> &[Vec<f64>] {
        &self.link_cost
    }

    pub fn total_capacity(&self) -> f64 {
        self.capacities.iter().sum()
    }
}

impl TryFrom<MachineGraphData> for MachineGraph {
    type Error = GraphError;
    fn try_from(data: MachineGraphData) -> Result<Self, Self::Error> {
        Self::new(data.capacities, data.link_cost)
    }
}

impl From<MachineGraph> for MachineGraphData {
    fn from(g: MachineGraph) -> Self {
        Self {
            capacities: g.capacities,
            link_cost: g.link_cost,
        }
    }
}

/// A named problem instance. An instance may be infeasible (some component
/// larger than every machine); solvers detect and report that rather than
/// assuming it away.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    #[serde(rename = "application")]
    pub app: ApplicationGraph,
    pub machines: MachineGraph,
}

impl Instance {
    pub fn new(name: impl Into<String>, app: ApplicationGraph, machines: MachineGraph) -> Self {
        Self {
            name: name.into(),
            app,
            machines,
        }
    }

    /// Serialize to the canonical on-disk JSON form (pretty, trailing newline).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn check_genes(app: &ApplicationGraph, machines: &MachineGraph, genes: &[usize]) {
    assert_eq!(
        genes.len(),
        app.vertex_count(),
        "gene vector length {} does not match vertex count {}",
        genes.len(),
        app.vertex_count()
    );
    let m = machines.machine_count();
    assert!(
        genes.iter().all(|&g| g < m),
        "gene value out of machine range 0..{m}"
    );
}

/// Total weighted communication cost across machine boundaries: each
/// undirected edge `(i, j)` contributes `w_ij * link_cost(genes[i], genes[j])`
/// exactly once. Co-located edges contribute nothing (the diagonal is zero).
pub fn cut_cost(app: &ApplicationGraph, machines: &MachineGraph, genes: &[usize]) -> f64 {
    check_genes(app, machines, genes);
    let mut total = 0.0;
    for &(i, j, w) in app.edges() {
        total += w * machines.link_cost(genes[i], genes[j]);
    }
    total
}

/// Per-machine loads of an assignment, summed in fixed vertex-index order so
/// repeated computation is bit-reproducible.
pub fn machine_loads(app: &ApplicationGraph, machines: &MachineGraph, genes: &[usize]) -> Vec<f64> {
    check_genes(app, machines, genes);
    let mut loads = vec![0.0; machines.machine_count()];
    for (i, &g) in genes.iter().enumerate() {
        loads[g] += app.demand(i);
    }
    loads
}

/// The hard capacity constraint: every machine's summed demand stays within
/// its capacity.
pub fn is_feasible(app: &ApplicationGraph, machines: &MachineGraph, genes: &[usize]) -> bool {
    let loads = machine_loads(app, machines, genes);
    loads
        .iter()
        .zip(machines.capacities())
        .all(|(&load, &cap)| load <= cap)
}
