mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use swapreach::dynamics::{greedy_swap, greedy_swap_with, verify_trace, LowestHolder, RandomOrder};
use swapreach::generate::{generate, rng_for, GenMode};
use swapreach::geometry::{path_of, shared_paths, total_displacement, CandidateTable};
use swapreach::io;
use swapreach::solver::normalise;
use swapreach::twosat::{Lit, TwoSat};
use swapreach::{
    oracle_reachable_assignment, reduce_ro_to_ra, solve, AgentId, Direction, Instance, ObjectId, Selection,
};

use common::*;

fn mode() -> impl Strategy<Value = GenMode> {
    prop_oneof![
        Just(GenMode::Random),
        Just(GenMode::YesGuaranteed),
        Just(GenMode::Perturbed)
    ]
}

fn small_instance() -> impl Strategy<Value = Instance> {
    (3usize..=6, any::<u64>(), mode()).prop_map(|(n, seed, m)| generate(n, m, seed))
}

fn reduced_instance(max_n: usize) -> impl Strategy<Value = Instance> {
    (3usize..=max_n, any::<u64>(), mode())
        .prop_filter_map("trivially unreachable", |(n, seed, m)| {
            normalise(&generate(n, m, seed)).unwrap()
        })
}

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Cw), Just(Direction::Ccw)]
}

/// Components of the shared path walked vertex by vertex, with the number
/// of edges where the swap is rational.
fn naive_shared(inst: &Instance, p: ObjectId, q: ObjectId, dir: Direction) -> Vec<(usize, usize, usize)> {
    let n = inst.n();
    let pp = path_of(inst, p, dir);
    let qp = path_of(inst, q, dir.flip());
    let qv: HashSet<usize> = qp.agents().iter().map(|a| a.0).collect();
    let qe: HashSet<usize> = qp.edges().into_iter().collect();
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    let mut open = false;
    for i in 0..=pp.len {
        if !qv.contains(&pp.vertex(i)) {
            open = false;
            continue;
        }
        if open && qe.contains(&pp.edge(i - 1)) {
            let k = pp.edge(i - 1);
            let (lo, hi) = (AgentId(k), AgentId((k + 1) % n));
            let (cw, ccw) = if dir == Direction::Cw { (p, q) } else { (q, p) };
            let ok = inst.accepts(lo, ccw, cw) && inst.accepts(hi, cw, ccw);
            let last = out.last_mut().unwrap();
            last.1 = i;
            last.2 += usize::from(ok);
        } else {
            out.push((i, i, 0));
        }
        open = true;
    }
    out
}

proptest! {
    #[test]
    fn solver_matches_brute_force(inst in small_instance()) {
        let sol = solve(&inst).unwrap();
        prop_assert_eq!(sol.reachable, brute_force_assignment(&inst));
        if let Some(trace) = &sol.trace {
            prop_assert!(verify_trace(&inst, trace).is_ok());
            if let (Some((a, b)), Some(first)) = (sol.first_swap_edge, trace.first()) {
                prop_assert_eq!((a, b), (first.a, first.b));
            }
        }
        prop_assert_eq!(sol.gate_rejections, 0);
    }

    #[test]
    fn library_oracle_matches_brute_force(inst in small_instance()) {
        let lib = oracle_reachable_assignment(&inst, 8).unwrap();
        prop_assert_eq!(lib.is_yes(), brute_force_assignment(&inst));
        if let swapreach::OracleAnswer::Yes(trace) = lib {
            prop_assert!(verify_trace(&inst, &trace).is_ok());
        }
    }

    #[test]
    fn shared_paths_match_vertex_walk(inst in reduced_instance(9), p in 0usize..9, q in 0usize..9, dir in direction()) {
        let n = inst.n();
        let (p, q) = (ObjectId(p % n), ObjectId(q % n));
        prop_assume!(p != q);
        let fast: Vec<_> = shared_paths(&inst, p, q, dir)
            .iter()
            .map(|s| (s.p_first, s.p_last, s.swappable))
            .collect();
        prop_assert_eq!(&fast, &naive_shared(&inst, p, q, dir));
        let table = CandidateTable::build(&inst).unwrap();
        let from_table: Vec<_> = table.shared(p, q, dir).iter().map(|s| (s.p_first, s.p_last, s.swappable)).collect();
        prop_assert_eq!(&from_table, &fast);
    }

    #[test]
    fn candidate_lists_are_bounded_and_consistent(inst in reduced_instance(12)) {
        let n = inst.n();
        let table = CandidateTable::build(&inst).unwrap();
        for p in (0..n).map(ObjectId) {
            let mut size = 0;
            for dir in [Direction::Ccw, Direction::Cw] {
                let path = table.path(p, dir);
                for (i, list) in table.lists_along(p, dir).iter().enumerate() {
                    size += list.len();
                    let k = path.edge(i);
                    for &q in list {
                        prop_assert!(swapreach::geometry::swap_edges(&inst, p, q, dir).contains(&k));
                    }
                }
            }
            prop_assert!(size <= 4 * n);
        }
    }

    #[test]
    fn successful_selections_conserve_clockwise_count(inst in reduced_instance(8)) {
        let n = inst.n();
        let table = CandidateTable::build(&inst).unwrap();
        let y = total_displacement(&inst);
        for m in 0..1u64 << n {
            let gamma = Selection::from_mask(m, n);
            let reached = greedy_swap(&inst, &gamma).is_reached();
            prop_assert_eq!(reached, swapreach::is_valid(&gamma, &table));
            if reached {
                let cw = (0..n)
                    .map(ObjectId)
                    .filter(|&o| table.is_stationary(o) || gamma.get(o) == Direction::Cw)
                    .count();
                prop_assert_eq!(cw, n - y / n);
            }
        }
    }

    #[test]
    fn swap_order_does_not_change_the_verdict(inst in reduced_instance(9), mask in any::<u64>(), policy in any::<u64>()) {
        let n = inst.n();
        let gamma = Selection::from_mask(mask & ((1 << n) - 1), n);
        let base = greedy_swap_with(&inst, &gamma, &mut LowestHolder);
        let other = greedy_swap_with(&inst, &gamma, &mut RandomOrder(ChaCha8Rng::seed_from_u64(policy)));
        prop_assert_eq!(base.is_reached(), other.is_reached());
    }

    #[test]
    fn twosat_matches_brute_force(
        vars in 1usize..=10,
        raw in prop::collection::vec((0usize..10, any::<bool>(), 0usize..10, any::<bool>()), 0..30),
    ) {
        let mut f = TwoSat::new(vars);
        for (a, pa, b, pb) in raw {
            f.add_clause(Lit::new(a % vars, pa), Lit::new(b % vars, pb));
        }
        let brute = (0..1u32 << vars).any(|m| {
            let bits: Vec<bool> = (0..vars).map(|v| m >> v & 1 == 1).collect();
            f.satisfied_by(&bits)
        });
        let model = f.solve();
        prop_assert_eq!(model.is_some(), brute);
        if let Some(model) = model {
            prop_assert!(f.satisfied_by(&model));
        }
    }

    #[test]
    fn reduction_shape_and_equivalence(n in 2usize..=4, seed in any::<u64>()) {
        let ro = random_clique_ro(n, &mut rng_for(seed));
        let ra = reduce_ro_to_ra(&ro).unwrap();
        prop_assert_eq!(ra.n(), 2 * n);
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                prop_assert!(ra.adjacent(AgentId(i), AgentId(j)));
            }
        }
        prop_assert_eq!(&ra.apply_rule_1().unwrap(), &ra);
        let wanted = ro.object;
        let asker_copy = n + ro.agent.0;
        for c in n..2 * n {
            if c != asker_copy {
                prop_assert!(!ra.preferences(AgentId(c)).contains(&wanted));
            }
        }
        prop_assert_eq!(brute_force_object(&ro), brute_force_assignment(&ra));
    }

    #[test]
    fn generator_is_deterministic_and_yes_mode_is_reachable(n in 3usize..=7, seed in any::<u64>()) {
        let a = generate(n, GenMode::YesGuaranteed, seed);
        prop_assert_eq!(&a, &generate(n, GenMode::YesGuaranteed, seed));
        prop_assert!(brute_force_assignment(&a));
        prop_assert!(solve(&a).unwrap().reachable);
    }

    #[test]
    fn json_round_trip(inst in small_instance(), one_based in any::<bool>()) {
        let text = io::instance_to_json(&inst, one_based).to_string();
        prop_assert_eq!(io::parse_instance(&text, one_based).unwrap(), inst);
    }
}
