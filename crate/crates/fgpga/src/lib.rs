//! Capacity-constrained partitioning of a weighted application graph onto a
//! heterogeneous machine fleet. Minimizes the total weighted communication
//! cost across machine boundaries subject to hard per-machine capacity
//! constraints.
//!
//! The crate bundles a feasibility-preserving genetic algorithm ([`ga`]), a
//! feasibility-repaired simulated-annealing baseline ([`sa`]), a random
//! benchmark-instance generator ([`generator`]), an exhaustive optimum
//! oracle for tiny instances ([`oracle`]) and a seeded, reproducible
//! benchmark harness ([`experiment`]).
//!
//! With the default `parallel` feature the oracle enumeration and the
//! experiment run matrix fan out over a rayon pool; a single solver run is
//! always sequential, so results are identical with the feature disabled.

pub mod assignment;
pub mod experiment;
pub mod ga;
pub mod generator;
pub mod graph;
pub mod oracle;
pub mod report;
pub mod sa;
#[cfg(test)]
pub(crate) mod testutil;

pub use assignment::Assignment;
pub use graph::{cut_cost, is_feasible, ApplicationGraph, Instance, MachineGraph};
pub use report::{RunReport, TraceRecord};
