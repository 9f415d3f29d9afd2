//! Randomized invariants: algebraic laws of the graph constructors, duality
//! between clique and independence, determinism of the search engine, and
//! agreement between independent decision procedures.

mod common;

use common::{gnp, target_pool};
use folkman::arrowing::{
    verify_certificate, vertex_arrowing_check, vertex_arrowing_check_with, ArrowingProblem, Mode,
    Outcome, SearchBudget,
};
use folkman::graph::{
    automorphism_count, clique_number, complete, from_graph6, independence_number, join,
    lex_product, to_graph6, triangle_count,
};
use folkman::sat::{sat_arrowing_check_with, SatOptions};
use folkman::Graph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random graph strategy: order in `1..=max_n`, each edge present with the
/// probability encoded by the seed.
fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0.1f64..0.9).prop_map(|(n, seed, p)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        gnp(n, p, &mut rng)
    })
}

proptest! {
    #[test]
    fn lex_product_order_is_multiplicative(g in arb_graph(8), h in arb_graph(8)) {
        let p = lex_product(&g, &h).unwrap();
        prop_assert_eq!(p.order(), g.order() * h.order());
    }

    #[test]
    fn lex_product_clique_is_multiplicative(g in arb_graph(8), h in arb_graph(8)) {
        let p = lex_product(&g, &h).unwrap();
        prop_assert_eq!(clique_number(&p), clique_number(&g) * clique_number(&h));
    }

    #[test]
    fn join_clique_is_additive(g in arb_graph(8), h in arb_graph(8)) {
        let j = join(&g, &h).unwrap();
        prop_assert_eq!(clique_number(&j), clique_number(&g) + clique_number(&h));
    }

    #[test]
    fn independence_is_clique_of_complement(g in arb_graph(12)) {
        prop_assert_eq!(independence_number(&g), clique_number(&g.complement()));
    }

    #[test]
    fn graph6_round_trips(g in arb_graph(70)) {
        let encoded = to_graph6(&g);
        let back = from_graph6(&encoded).unwrap();
        prop_assert_eq!(back.order(), g.order());
        prop_assert_eq!(back.edges(), g.edges());
    }

    /// Adding edges to the host can only help vertex arrowing: every copy of
    /// a target in the host survives in any supergraph on the same vertices.
    #[test]
    fn vertex_arrowing_is_monotone_under_edge_addition(
        seed in any::<u64>(),
        n in 4usize..=10,
        p in 0.2f64..0.7,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(n, p, &mut rng);
        let mut bigger = g.clone();
        for u in 0..n {
            for v in (u + 1)..n {
                if !bigger.has_edge(u, v) && rng.gen_bool(0.3) {
                    bigger.add_edge(u, v).unwrap();
                }
            }
        }
        let targets = vec![complete(3).unwrap(), complete(3).unwrap()];
        let before = ArrowingProblem::new(g, Mode::Vertex, targets.clone(), None).unwrap();
        let after = ArrowingProblem::new(bigger, Mode::Vertex, targets, None).unwrap();
        let v1 = vertex_arrowing_check(&before).unwrap();
        if v1.outcome == Outcome::Arrows {
            let v2 = vertex_arrowing_check(&after).unwrap();
            prop_assert_eq!(v2.outcome, Outcome::Arrows);
        }
    }

    /// The verdict (outcome and witness) is a pure function of the problem:
    /// repeated runs and different worker counts give identical answers.
    #[test]
    fn verdicts_are_deterministic_and_job_independent(
        seed in any::<u64>(),
        n in 4usize..=10,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(n, 0.5, &mut rng);
        let pool = target_pool();
        let t1 = pool[rng.gen_range(0..pool.len())].clone();
        let t2 = pool[rng.gen_range(0..pool.len())].clone();
        let problem = ArrowingProblem::new(g, Mode::Vertex, vec![t1, t2], None).unwrap();
        let budget = SearchBudget::default();
        let a = vertex_arrowing_check_with(&problem, &budget, 1).unwrap();
        let b = vertex_arrowing_check_with(&problem, &budget, 1).unwrap();
        let c = vertex_arrowing_check_with(&problem, &budget, 3).unwrap();
        prop_assert_eq!(a.outcome, b.outcome);
        prop_assert_eq!(&a.witness, &b.witness);
        prop_assert_eq!(a.stats.nodes, b.stats.nodes);
        prop_assert_eq!(a.outcome, c.outcome);
        prop_assert_eq!(&a.witness, &c.witness);
    }

    /// The exhaustive engine and the CNF path must never disagree, and every
    /// refutation witness from either must check out independently.
    #[test]
    fn exhaustive_and_sat_agree(seed in any::<u64>(), n in 4usize..=11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(n, rng.gen_range(0.25..0.85), &mut rng);
        let pool = target_pool();
        let t1 = pool[rng.gen_range(0..pool.len())].clone();
        let t2 = pool[rng.gen_range(0..pool.len())].clone();
        let problem = ArrowingProblem::new(g, Mode::Vertex, vec![t1, t2], None).unwrap();
        let ex = vertex_arrowing_check(&problem).unwrap();
        let sat = sat_arrowing_check_with(&problem, SatOptions::default()).unwrap();
        prop_assert_eq!(ex.outcome, sat.outcome);
        for v in [&ex, &sat] {
            if let Some(w) = &v.witness {
                prop_assert!(verify_certificate(&problem, w).unwrap());
            }
        }
    }
}

#[test]
fn complete_graph_formulas() {
    for n in 2..=8usize {
        let k = complete(n).unwrap();
        assert_eq!(triangle_count(&k), (n * (n - 1) * (n - 2) / 6) as u64);
        let factorial: u64 = (1..=n as u64).product();
        assert_eq!(automorphism_count(&k).unwrap(), factorial);
    }
}

/// The random-instance distribution used above must exercise both verdicts,
/// otherwise the agreement property would be vacuous on one side.
#[test]
fn random_instances_hit_both_outcomes() {
    let mut seen_arrows = false;
    let mut seen_refuted = false;
    for seed in 0..60u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = gnp(rng.gen_range(4..=11), rng.gen_range(0.25..0.85), &mut rng);
        let pool = target_pool();
        let t1 = pool[rng.gen_range(0..pool.len())].clone();
        let t2 = pool[rng.gen_range(0..pool.len())].clone();
        let problem = ArrowingProblem::new(g, Mode::Vertex, vec![t1, t2], None).unwrap();
        match vertex_arrowing_check(&problem).unwrap().outcome {
            Outcome::Arrows => seen_arrows = true,
            Outcome::NotArrows => seen_refuted = true,
        }
        if seen_arrows && seen_refuted {
            return;
        }
    }
    panic!("60 seeds produced only one outcome: arrows={seen_arrows} refuted={seen_refuted}");
}

#[test]
fn copy_lists_are_duplicate_free_and_reverify() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let host = gnp(rng.gen_range(4..=10), 0.5, &mut rng);
        for pattern in target_pool() {
            for mode in [Mode::Vertex, Mode::Edge] {
                let copies = folkman::arrowing::enumerate_copies(&host, &pattern, mode).unwrap();
                let mut masks = copies.masks.clone();
                masks.sort_unstable();
                masks.dedup();
                assert_eq!(masks.len(), copies.len(), "duplicate copies");
                assert!(copies.reverify(&host, &pattern).unwrap());
            }
        }
    }
}
