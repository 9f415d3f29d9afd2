//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use folkman::graph::{complete, is_isomorphic, near_complete, triangle_count};
use folkman::Graph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi G(n,p) with the caller's generator, so every suite is seeded
/// and reproducible.
pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// The small target patterns used by the randomized arrowing suites.
pub fn target_pool() -> Vec<Graph> {
    vec![
        complete(2).unwrap(),
        complete(3).unwrap(),
        near_complete(3).unwrap(),
        near_complete(4).unwrap(),
    ]
}

/// Every labeled graph on `n` vertices, one per edge-subset bitmask.
fn labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            Graph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

/// All isomorphism classes of graphs with order in `1..=max_n`, by brute
/// force: enumerate labeled graphs and keep one representative per class.
pub fn graph_classes(max_n: usize) -> Vec<Graph> {
    let mut reps: Vec<Graph> = Vec::new();
    for n in 1..=max_n {
        for g in labeled_graphs(n) {
            let known = reps
                .iter()
                .filter(|r| r.order() == n)
                .any(|r| is_isomorphic(r, &g).unwrap());
            if !known {
                reps.push(g);
            }
        }
    }
    reps
}

/// The triangle-free members of [`graph_classes`].
pub fn triangle_free_classes(max_n: usize) -> Vec<Graph> {
    graph_classes(max_n)
        .into_iter()
        .filter(|g| triangle_count(g) == 0)
        .collect()
}
