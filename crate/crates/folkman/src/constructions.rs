//! Named witness-graph recipes.
//!
//! Every upper bound this crate certifies is witnessed by an explicitly built
//! graph, and each recipe here is exposed through the CLI as a `build`/
//! `certify` target.  Builders only construct; the (sometimes expensive)
//! clique-freeness and arrowing verification is always a separate call, so
//! nothing here runs a search unless a precondition demands a cheap one.
//!
//! The two embedded 14-vertex graphs `Ga` and `Gb` are the seeds for the
//! larger recipes: both are K4-free and arrow `(K3,K3)^v`, `Ga` has the
//! largest induced triangle-free subgraphs our dropping recipe wants, and
//! `Gb` (the one with independence number 7) has the small
//! two-independent-set unions the 26-vertex recipe wants.  Their adjacency
//! data is validated on every load against independent structural facts, so
//! a transcription error cannot slip through silently.

use crate::graph::{
    self, complete, cycle, empty_graph, is_isomorphic, join, lex_product,
    max_induced_clique_free, triangle_count, Graph, VertexSet,
};
use crate::{Error, Result};

/// The two embedded figure graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureId {
    Ga,
    Gb,
}

// Adjacency matrices, one row string per vertex ('1' = edge).  Vertex ids are
// 0-based here; comments refer to the 0-based blocks.
//
// Ga: vertices 0-4 and 5-9 each induce a pentagon, 10-12 a triangle, and
// vertex 13 is adjacent to exactly 0-9.
const GA_ROWS: [&str; 14] = [
    "01100110001001",
    "10010000110011",
    "10001001010101",
    "01001101000101",
    "00110010100011",
    "10010000111101",
    "10001001011011",
    "00110010101101",
    "01001101001011",
    "01100110000111",
    "10000111100110",
    "00110101011010",
    "01001010111100",
    "11111111110000",
];

// Gb: vertices 0-6 are pairwise nonadjacent (the unique maximum independent
// set), vertices 7-13 induce the complement of a 7-cycle.
const GB_ROWS: [&str; 14] = [
    "00000001111000",
    "00000001110100",
    "00000001101010",
    "00000001010101",
    "00000000101011",
    "00000000010111",
    "00000000001111",
    "11110000110011",
    "11101001001101",
    "11010101001110",
    "10101010110110",
    "01010110111001",
    "00101111011001",
    "00011111100110",
];

fn graph_from_rows(rows: &[&str]) -> Graph {
    let n = rows.len();
    let mut g = Graph::new(n).expect("figure order fits");
    for (u, row) in rows.iter().enumerate() {
        assert_eq!(row.len(), n, "row {u} has wrong length");
        for (v, c) in row.bytes().enumerate() {
            match c {
                b'1' => {
                    assert_ne!(u, v, "loop at {u}");
                    g.add_edge(u, v).expect("valid edge");
                }
                b'0' => assert!(
                    u == v || rows[v].as_bytes()[u] == b'0',
                    "asymmetric entry at ({u},{v})"
                ),
                _ => panic!("bad matrix character at ({u},{v})"),
            }
        }
    }
    g
}

fn induces(g: &Graph, ids: std::ops::Range<usize>, expect: &Graph) -> bool {
    let set = VertexSet::new(ids.collect(), g.order()).expect("in range");
    let sub = g.induced_subgraph(&set).expect("in range");
    is_isomorphic(&sub, expect).expect("small order")
}

/// One of the two embedded 14-vertex graphs, validated on load.
pub fn figure_graph(which: FigureId) -> Graph {
    match which {
        FigureId::Ga => {
            let g = graph_from_rows(&GA_ROWS).with_label("Ga");
            assert_eq!(g.edge_count(), 48, "Ga edge count");
            assert_eq!(triangle_count(&g), 41, "Ga triangle count");
            assert_eq!(graph::max_degree(&g), 10, "Ga max degree");
            // The one degree-10 vertex is 13 and sees exactly 0..9.
            assert_eq!(g.neighbors(13), (1u128 << 10) - 1, "Ga apex neighborhood");
            let c5 = cycle(5).expect("c5");
            assert!(induces(&g, 0..5, &c5), "Ga vertices 0-4 induce C5");
            assert!(induces(&g, 5..10, &c5), "Ga vertices 5-9 induce C5");
            assert!(induces(&g, 10..13, &complete(3).expect("k3")), "Ga vertices 10-12 induce K3");
            g
        }
        FigureId::Gb => {
            let g = graph_from_rows(&GB_ROWS).with_label("Gb");
            assert_eq!(g.edge_count(), 42, "Gb edge count");
            assert_eq!(triangle_count(&g), 35, "Gb triangle count");
            for u in 0..7 {
                for v in u + 1..7 {
                    assert!(!g.has_edge(u, v), "Gb vertices 0-6 are independent");
                }
            }
            let co_c7 = cycle(7).expect("c7").complement();
            assert!(induces(&g, 7..14, &co_c7), "Gb vertices 7-13 induce co-C7");
            g
        }
    }
}

/// Lexicographic product labeled as a product witness.
pub fn product_witness(outer: &Graph, inner: &Graph) -> Result<Graph> {
    let label = format!(
        "product[{}x{}]",
        outer.label().unwrap_or("outer"),
        inner.label().unwrap_or("inner")
    );
    Ok(lex_product(outer, inner)?.with_label(label))
}

/// Disjoint union of five blocks plus complete joins between block pairs
/// (0,2), (0,4), (1,3), (1,4), (2,3) — a blow-up of the 5-cycle
/// 0-2-3-1-4-0, so the cross edges alone are triangle-free.  Block vertex
/// ranges are recorded in the label.
pub fn five_block(blocks: [&Graph; 5]) -> Result<Graph> {
    const JOINS: [(usize, usize); 5] = [(0, 2), (0, 4), (1, 3), (1, 4), (2, 3)];
    let n: usize = blocks.iter().map(|b| b.order()).sum();
    let mut g = Graph::new(n)?;
    let mut offset = [0usize; 6];
    for i in 0..5 {
        offset[i + 1] = offset[i] + blocks[i].order();
    }
    for (i, b) in blocks.iter().enumerate() {
        for (u, v) in b.edges() {
            g.add_edge(offset[i] + u, offset[i] + v)?;
        }
    }
    for (i, j) in JOINS {
        for u in 0..blocks[i].order() {
            for v in 0..blocks[j].order() {
                g.add_edge(offset[i] + u, offset[j] + v)?;
            }
        }
    }
    let ranges = (0..5)
        .map(|i| {
            format!(
                "{}..{}={}",
                offset[i],
                offset[i + 1],
                blocks[i].label().unwrap_or("?")
            )
        })
        .collect::<Vec<_>>()
        .join(",");
    Ok(g.with_label(format!("five_block[{ranges}]")))
}

/// The block-level quotient of [`five_block`]: 5 vertices, one per block,
/// with the 5 join pairs as edges.  Exposed so tests can assert it is a
/// triangle-free cycle.
pub fn five_block_quotient() -> Graph {
    Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (1, 4), (2, 3)])
        .expect("static edges are valid")
        .with_label("five_block_quotient")
}

/// 9-vertex triangle-free witness: `C5[E2]` with its last vertex dropped.
pub fn claim5_witness9() -> Graph {
    let blow = lex_product(&cycle(5).expect("c5"), &empty_graph(2).expect("e2"))
        .expect("order 10 fits");
    blow.delete_vertices(&VertexSet::new(vec![9], 10).expect("valid"))
        .expect("valid")
        .with_label("N9")
}

/// 8-vertex triangle-free witness: `C8` plus its four main diagonals
/// `{i, i+4}`; 3-regular with 12 edges.
pub fn claim5_witness8() -> Graph {
    let mut g = cycle(8).expect("c8");
    for i in 0..4 {
        g.add_edge(i, i + 4).expect("valid diagonal");
    }
    g.with_label("W8")
}

/// The five-block instance proving the 36-vertex bound: blocks
/// `(C5, W8, N9, C5, N9)`.  Roles by position: blocks 0 and 3 carry the
/// `(K2,K2)` witness, block 1 the `(K2,J3)` witness, blocks 2 and 4 the
/// `(J3,J3)` witnesses; the join pattern above is what makes the assembly
/// arrow `(J5,J5)^v` while staying K5-free.
pub fn claim5_five_block() -> Result<Graph> {
    let c5 = cycle(5)?;
    let w8 = claim5_witness8();
    let n9 = claim5_witness9();
    five_block([&c5, &w8, &n9, &c5, &n9])
}

/// Triple blow-up minus one copy of an extremal set: computes the largest
/// induced `K_{k-1}`-free subset `S` of `g`, builds `g[E3]`, and deletes the
/// third copy of every `S`-vertex.  Output order is `3|V(g)| - |S|`.
///
/// The recipe needs `g` to arrow `(K_{k-1},K_{k-1})^v`; that precondition is
/// verified here when `g` is small enough for the exhaustive engine.
pub fn theorem8_drop(g: &Graph, k: usize) -> Result<Graph> {
    if k < 3 {
        return Err(Error::invalid("theorem8_drop needs k >= 3"));
    }
    let target = complete(k - 1)?;
    if g.order() <= crate::arrowing::SearchBudget::default().max_vertex_elements {
        let problem = crate::arrowing::ArrowingProblem::new(
            g.clone(),
            crate::arrowing::Mode::Vertex,
            vec![target.clone(), target.clone()],
            None,
        )?;
        let verdict = crate::arrowing::vertex_arrowing_check(&problem)?;
        if verdict.outcome == crate::arrowing::Outcome::NotArrows {
            return Err(Error::invalid(format!(
                "theorem8_drop precondition failed: the graph does not arrow (K{0},K{0})^v",
                k - 1
            )));
        }
    }
    let s = max_induced_clique_free(g, k - 1)?;
    let triple = lex_product(g, &empty_graph(3)?)?;
    let drop: Vec<usize> = s.as_slice().iter().map(|&u| 3 * u + 2).collect();
    let out = triple.delete_vertices(&VertexSet::new(drop, triple.order())?)?;
    Ok(out.with_label(format!(
        "theorem8_drop[{},k={k},|S|={}]",
        g.label().unwrap_or("g"),
        s.len()
    )))
}

/// 50-vertex K4-free graph and its 51-vertex cone.
///
/// Start from `Ga[E5]` (70 vertices), take `X` = the neighborhood of the
/// unique degree-10 vertex, and delete two of the five copies of every
/// `X`-vertex; coning the result gives the K5-free edge-arrowing witness.
/// The default drops the two highest copy indices.
pub fn theorem10_graph() -> Result<(Graph, Graph)> {
    theorem10_graph_with((3, 4))
}

/// As [`theorem10_graph`], dropping the given pair of copy indices (0-4);
/// every choice produces the same graph up to relabeling.
pub fn theorem10_graph_with(drop_copies: (usize, usize)) -> Result<(Graph, Graph)> {
    let (c1, c2) = drop_copies;
    if c1 == c2 || c1 >= 5 || c2 >= 5 {
        return Err(Error::invalid(format!(
            "copy indices must be two distinct values in 0..5, got {drop_copies:?}"
        )));
    }
    let ga = figure_graph(FigureId::Ga);
    let apex = (0..ga.order())
        .max_by_key(|&v| ga.degree(v))
        .expect("nonempty");
    let x = ga.neighbors(apex);
    let g1 = lex_product(&ga, &empty_graph(5)?)?;
    let mut drop = Vec::new();
    for u in graph::iter_bits(x) {
        drop.push(5 * u + c1);
        drop.push(5 * u + c2);
    }
    let h = g1
        .delete_vertices(&VertexSet::new(drop, g1.order())?)?
        .with_label(format!("theorem10_h[drop={c1},{c2}]"));
    let g = join(&complete(1)?, &h)?.with_label(format!("theorem10_g[drop={c1},{c2}]"));
    Ok((h, g))
}

/// The seven nonadjacent pairs among `Gb`'s vertices 7-13 (the complement of
/// a 7-cycle), ascending.  These are the valid `nonedge` choices for
/// [`theorem11_graph`].
pub fn theorem11_nonedges() -> Vec<(usize, usize)> {
    let gb = figure_graph(FigureId::Gb);
    let mut out = Vec::new();
    for u in 7..14 {
        for v in u + 1..14 {
            if !gb.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    debug_assert_eq!(out.len(), 7);
    out
}

/// 26-vertex K4-free graph and its 27-vertex cone.
///
/// Start from `Gb[E3]` (42 vertices) and keep one copy of each vertex of the
/// 7-element independent set, two copies of each endpoint of one nonedge
/// inside the second block, and all three copies of the remaining five
/// vertices: 7 + 4 + 15 = 26.  Any of the seven nonedges works; the default
/// is the lexicographically least.
pub fn theorem11_graph(nonedge: Option<(usize, usize)>) -> Result<(Graph, Graph)> {
    theorem11_graph_with(nonedge, 0, 2)
}

/// As [`theorem11_graph`], also choosing which copy each X-vertex keeps and
/// which copy each Y-vertex drops; every choice produces the same graph up
/// to relabeling.
pub fn theorem11_graph_with(
    nonedge: Option<(usize, usize)>,
    x_keep: usize,
    y_drop: usize,
) -> Result<(Graph, Graph)> {
    if x_keep >= 3 || y_drop >= 3 {
        return Err(Error::invalid("copy indices must lie in 0..3"));
    }
    let valid = theorem11_nonedges();
    let y = match nonedge {
        Some((u, v)) => {
            let y = (u.min(v), u.max(v));
            if !valid.contains(&y) {
                return Err(Error::invalid(format!(
                    "nonedge {y:?} is not a nonadjacent pair among vertices 7..14; valid: {valid:?}"
                )));
            }
            y
        }
        None => valid[0],
    };
    let gb = figure_graph(FigureId::Gb);
    let g1 = lex_product(&gb, &empty_graph(3)?)?;
    let mut drop = Vec::new();
    for u in 0..14 {
        if u < 7 {
            // X: keep one copy.
            for c in 0..3 {
                if c != x_keep {
                    drop.push(3 * u + c);
                }
            }
        } else if u == y.0 || u == y.1 {
            // Y: keep two copies.
            drop.push(3 * u + y_drop);
        }
        // Z: keep all three copies.
    }
    let h = g1
        .delete_vertices(&VertexSet::new(drop, g1.order())?)?
        .with_label(format!("theorem11_h[Y={},{}]", y.0, y.1));
    let g = join(&complete(1)?, &h)?.with_label(format!("theorem11_g[Y={},{}]", y.0, y.1));
    Ok((h, g))
}

/// Pentagon blow-up `C5[E_{2t-1}]`: order `10t - 5`, triangle-free.
pub fn c5_blowup(t: usize) -> Result<Graph> {
    if t < 1 {
        return Err(Error::invalid("c5_blowup needs t >= 1"));
    }
    let g = lex_product(&cycle(5)?, &empty_graph(2 * t - 1)?)?;
    Ok(g.with_label(format!("c5_blowup[t={t}]")))
}

/// The cone `K3 + C5`: 8 vertices, 23 edges, clique number 5.
pub fn cone_k3c5() -> Result<Graph> {
    Ok(join(&complete(3)?, &cycle(5)?)?.with_label("K3+C5"))
}
