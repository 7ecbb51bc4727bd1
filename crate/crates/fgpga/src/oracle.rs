//! Ground-truth optimum by exhaustive enumeration of all `Mn^V` assignments.
//! Only viable for tiny instances; anchors solver validation.

use thiserror::Error;

use crate::graph::{cut_cost, is_feasible, Instance};

/// Default cap on the number of enumerated states.
pub const DEFAULT_STATE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("state space {states} exceeds budget {budget}; refusing to enumerate")]
    BudgetExceeded { states: u128, budget: u64 },
}

/// The provably optimal feasible assignment, if any exists.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub cost: f64,
    /// Lexicographically smallest gene vector among all optima.
    pub genes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// `None` when no feasible assignment exists.
    pub optimum: Option<Optimum>,
    pub states_enumerated: u64,
}

/// Exhaustively enumerate all assignments, filter by feasibility and minimize
/// the cut cost. Refuses (never silently approximates) when `Mn^V` exceeds
/// `budget`. Ties on cost resolve to the lexicographically smallest genes.
///
/// With the `parallel` feature the state space is partitioned by gene prefix
/// across workers; the merge is an associative min that preserves the
/// sequential tie-break, so results are identical in both modes.
pub fn solve_exact(instance: &Instance, budget: u64) -> Result<OracleResult, OracleError> {
    let states = checked_state_count(instance, budget)?;
    #[cfg(feature = "parallel")]
    {
        Ok(solve_parallel(instance, states))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(solve_serial_impl(instance, states))
    }
}

/// Single-threaded enumeration. [`solve_exact`] delegates here when the
/// `parallel` feature is disabled; kept public so the two paths can be
/// compared directly.
pub fn solve_exact_serial(instance: &Instance, budget: u64) -> Result<OracleResult, OracleError> {
    let states = checked_state_count(instance, budget)?;
    Ok(solve_serial_impl(instance, states))
}

fn checked_state_count(instance: &Instance, budget: u64) -> Result<u64, OracleError> {
    let v = instance.app.vertex_count() as u32;
    let m = instance.machines.machine_count() as u128;
    let states = m.checked_pow(v).unwrap_or(u128::MAX);
    if states > budget as u128 {
        return Err(OracleError::BudgetExceeded { states, budget });
    }
    Ok(states as u64)
}

fn solve_serial_impl(instance: &Instance, states: u64) -> OracleResult {
    let v = instance.app.vertex_count();
    let best = enumerate_suffix(instance, &mut vec![0; v], 0);
    OracleResult {
        optimum: best,
        states_enumerated: states,
    }
}

/// Enumerate all completions of `genes[..fixed]` in lexicographic order,
/// returning the first-found optimum (which is the lexicographically smallest
/// because updates are strict).
fn enumerate_suffix(instance: &Instance, genes: &mut [usize], fixed: usize) -> Option<Optimum> {
    let v = genes.len();
    let m = instance.machines.machine_count();
    let mut best: Option<Optimum> = None;
    loop {
        if is_feasible(&instance.app, &instance.machines, genes) {
            let cost = cut_cost(&instance.app, &instance.machines, genes);
            if best.as_ref().is_none_or(|b| cost < b.cost) {
                best = Some(Optimum {
                    cost,
                    genes: genes.to_vec(),
                });
            }
        }
        // Odometer step over positions fixed..v, last position fastest.
        let mut pos = v;
        loop {
            if pos == fixed {
                return best;
            }
            pos -= 1;
            genes[pos] += 1;
            if genes[pos] < m {
                break;
            }
            genes[pos] = 0;
        }
    }
}

#[cfg(feature = "parallel")]
fn solve_parallel(instance: &Instance, states: u64) -> OracleResult {
    use rayon::prelude::*;

    let v = instance.app.vertex_count();
    let m = instance.machines.machine_count();
    if m < 2 {
        return solve_serial_impl(instance, states);
    }
    // Fix a prefix long enough to give the pool some granularity.
    let mut prefix_len = 0;
    let mut tasks: u64 = 1;
    while prefix_len < v && tasks < 64 {
        tasks *= m as u64;
        prefix_len += 1;
    }
    let optimum = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut genes = vec![0usize; v];
            let mut rest = task;
            for pos in (0..prefix_len).rev() {
                genes[pos] = (rest % m as u64) as usize;
                rest /= m as u64;
            }
            enumerate_suffix(instance, &mut genes, prefix_len)
        })
        .reduce(|| None, merge_optima);
    OracleResult {
        optimum,
        states_enumerated: states,
    }
}

/// Associative merge preferring the lower cost; on exact ties the left
/// operand wins, which corresponds to the lexicographically earlier prefix.
#[cfg(feature = "parallel")]
fn merge_optima(a: Option<Optimum>, b: Option<Optimum>) -> Option<Optimum> {
    match (a, b) {
        (None, b) => b,
        (a, None) => a,
        (Some(a), Some(b)) => Some(if b.cost < a.cost { b } else { a }),
    }
}
