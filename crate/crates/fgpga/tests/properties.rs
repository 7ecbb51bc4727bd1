//! Property tests for the objective, the feasibility predicate and cache
//! coherence under move sequences.

use proptest::prelude::*;

use fgpga::assignment::Assignment;
use fgpga::graph::{cut_cost, is_feasible, machine_loads, ApplicationGraph, MachineGraph};

#[derive(Debug, Clone)]
struct Fixture {
    app: ApplicationGraph,
    machines: MachineGraph,
    genes: Vec<usize>,
}

#[allow(clippy::needless_range_loop)]
fn fixture() -> impl Strategy<Value = Fixture> {
    (2usize..10, 1usize..4)
        .prop_flat_map(|(v, m)| {
            let demands = prop::collection::vec(0.0f64..20.0, v);
            let edge_flags = prop::collection::vec(any::<bool>(), v * (v - 1) / 2);
            let edge_weights = prop::collection::vec(0.1f64..100.0, v * (v - 1) / 2);
            let capacities = prop::collection::vec(1.0f64..200.0, m);
            let link_upper = prop::collection::vec(0.0f64..10.0, m * (m - 1) / 2);
            let genes = prop::collection::vec(0usize..m, v);
            (
                Just((v, m)),
                demands,
                edge_flags,
                edge_weights,
                capacities,
                link_upper,
                genes,
            )
        })
        .prop_map(
            |((v, m), demands, flags, weights, capacities, upper, genes)| {
                let mut edges = Vec::new();
                let mut idx = 0;
                for i in 0..v {
                    for j in (i + 1)..v {
                        if flags[idx] {
                            edges.push((i, j, weights[idx]));
                        }
                        idx += 1;
                    }
                }
                let mut link = vec![vec![0.0; m]; m];
                let mut u = 0;
                for k in 0..m {
                    for l in (k + 1)..m {
                        link[k][l] = upper[u];
                        link[l][k] = upper[u];
                        u += 1;
                    }
                }
                Fixture {
                    app: ApplicationGraph::new(demands, edges).unwrap(),
                    machines: MachineGraph::new(capacities, link).unwrap(),
                    genes,
                }
            },
        )
}

proptest! {
    /// Relabeling machines by any permutation (and transforming the link
    /// matrix accordingly) leaves the cut cost unchanged.
    #[test]
    fn cut_cost_is_permutation_safe(fx in fixture(), perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let m = fx.machines.machine_count();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
        perm.shuffle(&mut rng);

        let mut link = vec![vec![0.0; m]; m];
        for k in 0..m {
            for l in 0..m {
                link[perm[k]][perm[l]] = fx.machines.link_cost(k, l);
            }
        }
        let caps: Vec<f64> = {
            let mut c = vec![0.0; m];
            for k in 0..m {
                c[perm[k]] = fx.machines.capacity(k);
            }
            c
        };
        let relabeled = MachineGraph::new(caps, link).unwrap();
        let mapped: Vec<usize> = fx.genes.iter().map(|&g| perm[g]).collect();
        let original = cut_cost(&fx.app, &fx.machines, &fx.genes);
        let transformed = cut_cost(&fx.app, &relabeled, &mapped);
        prop_assert!((original - transformed).abs() <= 1e-9 * original.abs().max(1.0));
    }

    /// All genes equal puts every edge inside one machine: zero cost.
    #[test]
    fn colocated_assignment_costs_nothing(fx in fixture(), target in 0usize..4) {
        let m = fx.machines.machine_count();
        let genes = vec![target % m; fx.app.vertex_count()];
        prop_assert_eq!(cut_cost(&fx.app, &fx.machines, &genes), 0.0);
    }

    #[test]
    fn cut_cost_is_non_negative(fx in fixture()) {
        prop_assert!(cut_cost(&fx.app, &fx.machines, &fx.genes) >= 0.0);
    }

    /// Raising any capacity never turns a feasible assignment infeasible.
    #[test]
    fn feasibility_is_monotone_in_capacity(fx in fixture(), which in any::<prop::sample::Index>(), boost in 0.0f64..500.0) {
        let feasible_before = is_feasible(&fx.app, &fx.machines, &fx.genes);
        let m = fx.machines.machine_count();
        let idx = which.index(m);
        let mut caps = fx.machines.capacities().to_vec();
        caps[idx] += boost;
        let raised = MachineGraph::new(caps, fx.machines.link_cost_matrix().to_vec()).unwrap();
        if feasible_before {
            prop_assert!(is_feasible(&fx.app, &raised, &fx.genes));
        }
    }

    /// After any random move sequence the cost cache matches a from-scratch
    /// recomputation to 1e-9 relative, and the load cache matches exactly.
    #[test]
    fn caches_stay_coherent_under_moves(fx in fixture(), moves in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 1..60)) {
        let v = fx.app.vertex_count();
        let m = fx.machines.machine_count();
        let mut a = Assignment::new(&fx.app, &fx.machines, fx.genes.clone());
        for (vi, mi) in moves {
            a.apply_move(&fx.app, &fx.machines, vi.index(v), mi.index(m));
            let exact_cost = cut_cost(&fx.app, &fx.machines, a.genes());
            let exact_loads = machine_loads(&fx.app, &fx.machines, a.genes());
            prop_assert!((a.cost() - exact_cost).abs() <= 1e-9 * exact_cost.abs().max(1.0));
            prop_assert_eq!(a.loads(), exact_loads.as_slice());
        }
    }
}
