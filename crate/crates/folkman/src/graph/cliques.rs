//! Exact clique, independence and triangle computations.
//!
//! `clique_number` is a bitset branch-and-bound in the style of Cliquer /
//! MCQ: vertices are expanded in a static order and each candidate set is
//! greedily colored to get an upper bound that prunes the branch.  Exact
//! answers on every graph this crate builds (up to 128 vertices, and in
//! practice K4/K5-free) come back in microseconds to milliseconds.

use super::Graph;

/// Largest number of pairwise adjacent vertices; 0 for the empty graph.
pub fn clique_number(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    // Static order: descending degree (ties by index) tends to shrink the
    // search tree; position i gets the candidate mask over later positions.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    // adj[i] = positions (in `order`) adjacent to position i.
    let mut adj = vec![0u128; n];
    for i in 0..n {
        for j in 0..n {
            if g.has_edge(order[i], order[j]) {
                adj[i] |= 1 << j;
            }
        }
    }
    let mut best = 0usize;
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    expand(&adj, all, 0, &mut best);
    best
}

/// Greedy coloring upper bound: number of color classes needed for `cand`.
fn color_bound(adj: &[u128], mut cand: u128) -> usize {
    let mut colors = 0;
    while cand != 0 {
        colors += 1;
        let mut class_avail = cand;
        while class_avail != 0 {
            let v = class_avail.trailing_zeros() as usize;
            cand &= !(1 << v);
            class_avail &= !(1 << v) & !adj[v];
        }
    }
    colors
}

fn expand(adj: &[u128], mut cand: u128, size: usize, best: &mut usize) {
    if cand == 0 {
        if size > *best {
            *best = size;
        }
        return;
    }
    if size + color_bound(adj, cand) <= *best {
        return;
    }
    // Branch on each candidate in turn, excluding it from later branches so
    // every maximal clique is tried exactly once.
    while cand != 0 {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= !(1u128 << v);
        expand(adj, cand & adj[v], size + 1, best);
    }
}

/// Largest pairwise nonadjacent vertex set, via the complement's cliques.
pub fn independence_number(g: &Graph) -> usize {
    clique_number(&g.complement())
}

/// Number of triangles (unordered vertex triples inducing `K_3`).
pub fn triangle_count(g: &Graph) -> u64 {
    let mut count = 0u64;
    for (u, v) in g.edges() {
        // Common neighbors above v close a triangle counted once per triple.
        let above = if v + 1 >= 128 { 0 } else { u128::MAX << (v + 1) };
        count += (g.neighbors(u) & g.neighbors(v) & above).count_ones() as u64;
    }
    count
}

/// Maximum vertex degree; 0 for the empty graph.
pub fn max_degree(g: &Graph) -> usize {
    (0..g.order()).map(|v| g.degree(v)).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::super::{
        complete, complete_multipartite, cycle, empty_graph, join, lex_product, near_complete,
        turan, Graph,
    };
    use super::*;

    /// Oracle: plain recursive maximum clique with no bound, adjacency-list
    /// style, independent of the bitset code above.
    fn clique_oracle(g: &Graph) -> usize {
        fn go(g: &Graph, cand: &[usize], size: usize, best: &mut usize) {
            if size > *best {
                *best = size;
            }
            for (i, &v) in cand.iter().enumerate() {
                let next: Vec<usize> = cand[i + 1..]
                    .iter()
                    .copied()
                    .filter(|&w| g.has_edge(v, w))
                    .collect();
                if size + 1 + next.len() > *best {
                    go(g, &next, size + 1, best);
                }
            }
        }
        let mut best = 0;
        let all: Vec<usize> = (0..g.order()).collect();
        go(g, &all, 0, &mut best);
        best
    }

    #[test]
    fn clique_number_basics() {
        assert_eq!(clique_number(&complete(0).unwrap()), 0);
        assert_eq!(clique_number(&empty_graph(6).unwrap()), 1);
        assert_eq!(clique_number(&complete(9).unwrap()), 9);
        assert_eq!(clique_number(&cycle(5).unwrap()), 2);
        assert_eq!(clique_number(&cycle(3).unwrap()), 3);
        assert_eq!(clique_number(&near_complete(5).unwrap()), 4);
        // Complete multipartite: one vertex per part.
        assert_eq!(clique_number(&complete_multipartite(&[2, 2, 3]).unwrap()), 3);
        assert_eq!(clique_number(&turan(4, 2).unwrap()), 4);
    }

    #[test]
    fn clique_number_matches_oracle_on_products() {
        let c5 = cycle(5).unwrap();
        let p = lex_product(&c5, &c5).unwrap();
        assert_eq!(clique_oracle(&p), 4);
        assert_eq!(clique_number(&p), 4);
        let q = lex_product(&c5, &complete(3).unwrap()).unwrap();
        assert_eq!(clique_number(&q), clique_oracle(&q));
        assert_eq!(clique_number(&q), 6);
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(independence_number(&cycle(5).unwrap()), 2);
        assert_eq!(independence_number(&complete(7).unwrap()), 1);
        assert_eq!(independence_number(&empty_graph(7).unwrap()), 7);
        assert_eq!(independence_number(&turan(4, 2).unwrap()), 2);
    }

    #[test]
    fn triangle_counts() {
        assert_eq!(triangle_count(&complete(4).unwrap()), 4);
        assert_eq!(triangle_count(&complete(6).unwrap()), 20); // C(6,3)
        assert_eq!(triangle_count(&cycle(3).unwrap()), 1);
        assert_eq!(triangle_count(&cycle(6).unwrap()), 0);
        assert_eq!(triangle_count(&complete_multipartite(&[2, 2, 3]).unwrap()), 12); // 2*2*3
    }

    #[test]
    fn degree_queries() {
        let g = join(&complete(1).unwrap(), &cycle(4).unwrap()).unwrap();
        assert_eq!(max_degree(&g), 4);
        assert_eq!(max_degree(&empty_graph(0).unwrap()), 0);
    }
}
