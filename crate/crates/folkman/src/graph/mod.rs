//! Dense small-graph representation and the product/join constructors.
//!
//! Graphs are simple and undirected, with vertices `0..order`.  Adjacency is
//! one 128-bit row per vertex, which caps the order at
//! [`MAX_VERTICES`] = 128; every witness built here is far below that (the
//! largest intermediate object has 70 vertices).  All layout choices are part
//! of the public contract because certificates refer to vertices and edges by
//! index:
//!
//! - `join(g, h)` keeps `g`'s vertices first, then `h`'s.
//! - `lex_product(g, h)` indexes pair `(u, v)` as `u * h.order() + v`.
//! - `complete_multipartite(parts)` lays parts out consecutively.
//! - edge lists are always sorted lexicographically as `(min, max)` pairs.

mod autom;
mod cliques;
mod extremal;
mod graph6;
mod subgraph;

pub use autom::{automorphism_count, is_isomorphic, AUTOMORPHISM_MAX_ORDER};
pub use cliques::{clique_number, independence_number, max_degree, triangle_count};
pub use extremal::{max_induced_clique_free, max_union_two_independent_sets, EXTREMAL_MAX_ORDER};
pub use graph6::{from_graph6, to_graph6};
pub use subgraph::{contains_subgraph, enumerate_embeddings, SUBGRAPH_PATTERN_MAX};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Hard representation limit: one `u128` adjacency row per vertex.
pub const MAX_VERTICES: usize = 128;

/// Iterate the set bit positions of a mask, ascending.
pub(crate) fn iter_bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// A simple undirected graph on `0..order`, at most [`MAX_VERTICES`] vertices.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    rows: Vec<u128>,
    label: Option<String>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!(
                "order {n} exceeds the representation limit {MAX_VERTICES}"
            )));
        }
        Ok(Graph { n, rows: vec![0; n], label: None })
    }

    /// Graph on `n` vertices with the given edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Optional human-readable label carried through serialization.
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn set_label(&mut self, label: impl Into<String>) {
        self.label = Some(label.into());
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.set_label(label);
        self
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::invalid(format!(
                "vertex {v} out of range for order {}",
                self.n
            )));
        }
        Ok(())
    }

    /// Insert the edge `{u, v}`; loops are rejected, re-insertion is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::invalid(format!("loop at vertex {u}")));
        }
        self.rows[u] |= 1u128 << v;
        self.rows[v] |= 1u128 << u;
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u] >> v & 1 == 1
    }

    /// Neighborhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u128 {
        self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u < v`, sorted lexicographically.
    ///
    /// This ordering defines the edge indices used by edge colorings,
    /// certificates and CNF variable maps.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in iter_bits(self.rows[u] & !mask_below(u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    /// Complement graph (labels are not carried over).
    pub fn complement(&self) -> Graph {
        let full = mask_below(self.n);
        let rows = (0..self.n)
            .map(|v| (full & !self.rows[v]) & !(1u128 << v))
            .collect();
        Graph { n: self.n, rows, label: None }
    }

    /// Subgraph induced on `keep`, relabeled to `0..keep.len()` in the order
    /// listed by `keep` (which is sorted ascending).
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<Graph> {
        keep.check_against(self.n)?;
        let ids = keep.as_slice();
        let mut g = Graph::new(ids.len())?;
        for (i, &u) in ids.iter().enumerate() {
            for (j, &v) in ids.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j)?;
                }
            }
        }
        Ok(g)
    }

    /// Delete the listed vertices; survivors keep their relative order.
    pub fn delete_vertices(&self, drop: &VertexSet) -> Result<Graph> {
        drop.check_against(self.n)?;
        let mut dropped = 0u128;
        for &v in drop.as_slice() {
            dropped |= 1 << v;
        }
        let keep: Vec<usize> = (0..self.n).filter(|&v| dropped >> v & 1 == 0).collect();
        self.induced_subgraph(&VertexSet::new(keep, self.n)?)
    }

    /// JSON dump `{order, edges, label}`.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dump<'a> {
            order: usize,
            edges: Vec<(usize, usize)>,
            label: Option<&'a str>,
        }
        serde_json::to_string(&Dump {
            order: self.n,
            edges: self.edges(),
            label: self.label(),
        })
        .expect("graph dump serialization cannot fail")
    }
}

/// Equality is structural (same order, same adjacency); labels are ignored.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.rows == other.rows
    }
}
impl Eq for Graph {}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}", self.n, self.edge_count())?;
        if let Some(l) = self.label() {
            write!(f, ", {l:?}")?;
        }
        write!(f, ")")
    }
}

fn mask_below(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

// ---------------------------------------------------------------------------
// Named constructors
// ---------------------------------------------------------------------------

/// Complete graph `K_n`.
pub fn complete(n: usize) -> Result<Graph> {
    let mut g = Graph::new(n)?;
    let full = mask_below(n);
    for v in 0..n {
        g.rows[v] = full & !(1u128 << v);
    }
    Ok(g.with_label(format!("K{n}")))
}

/// Edgeless graph `E_n`.
pub fn empty_graph(n: usize) -> Result<Graph> {
    Ok(Graph::new(n)?.with_label(format!("E{n}")))
}

/// Cycle `C_n` on vertices `0..n` in the natural order; requires `n >= 3`.
pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::invalid(format!("cycle needs order >= 3, got {n}")));
    }
    let mut g = Graph::new(n)?;
    for v in 0..n {
        g.add_edge(v, (v + 1) % n)?;
    }
    Ok(g.with_label(format!("C{n}")))
}

/// Near-complete graph `J_k = K_k` minus the edge `{0, 1}`; requires `k >= 2`.
pub fn near_complete(k: usize) -> Result<Graph> {
    if k < 2 {
        return Err(Error::invalid(format!(
            "near-complete needs order >= 2, got {k}"
        )));
    }
    let mut g = complete(k)?;
    g.rows[0] &= !2u128;
    g.rows[1] &= !1u128;
    Ok(g.with_label(format!("J{k}")))
}

/// Complete multipartite graph with the given part sizes, parts laid out
/// consecutively in the order given; all parts must be nonempty.
pub fn complete_multipartite(parts: &[usize]) -> Result<Graph> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::invalid("multipartite parts must be nonempty"));
    }
    let n: usize = parts.iter().sum();
    let mut g = Graph::new(n)?;
    let mut part_of = Vec::with_capacity(n);
    for (i, &p) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(i, p));
    }
    for u in 0..n {
        for v in u + 1..n {
            if part_of[u] != part_of[v] {
                g.add_edge(u, v)?;
            }
        }
    }
    let desc = parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
    Ok(g.with_label(format!("Kmp({desc})")))
}

/// Turán graph: `s` parts of size `t` each (so `st` vertices, `K_{s+1}`-free).
pub fn turan(s: usize, t: usize) -> Result<Graph> {
    if s == 0 || t == 0 {
        return Err(Error::invalid("turan needs s >= 1 and t >= 1"));
    }
    let g = complete_multipartite(&vec![t; s])?;
    Ok(g.with_label(format!("Turan({},{s})", s * t)))
}

/// Induced subgraph on the vertices named by a bitmask, relabeled in
/// ascending order.
pub fn induced_on_mask(g: &Graph, mask: u128) -> Result<Graph> {
    let ids: Vec<usize> = iter_bits(mask).collect();
    g.induced_subgraph(&VertexSet::new(ids, g.order())?)
}

/// Join `g + h`: disjoint union plus all edges between the two sides.
/// `g`'s vertices come first.
pub fn join(g: &Graph, h: &Graph) -> Result<Graph> {
    let n = g.n + h.n;
    let mut out = Graph::new(n)?;
    let cross = mask_below(n) & !mask_below(g.n);
    for v in 0..g.n {
        out.rows[v] = g.rows[v] | cross;
    }
    for v in 0..h.n {
        out.rows[g.n + v] = (h.rows[v] << g.n) | mask_below(g.n);
    }
    Ok(out)
}

/// Lexicographic product `g[h]`: vertex pair `(u, v)` is indexed as
/// `u * h.order() + v`, and `(u1, v1) ~ (u2, v2)` iff `u1 ~ u2` in `g`, or
/// `u1 = u2` and `v1 ~ v2` in `h`.
pub fn lex_product(g: &Graph, h: &Graph) -> Result<Graph> {
    let hn = h.n;
    let n = g
        .n
        .checked_mul(hn)
        .filter(|&n| n <= MAX_VERTICES)
        .ok_or_else(|| {
            Error::invalid(format!(
                "lex product order {} * {} exceeds the representation limit {MAX_VERTICES}",
                g.n, hn
            ))
        })?;
    let mut out = Graph::new(n)?;
    // Row of (u, v): h's row for v shifted into block u, plus the full blocks
    // of every g-neighbor of u.
    let block = mask_below(hn);
    for u in 0..g.n {
        let mut from_g = 0u128;
        for w in iter_bits(g.rows[u]) {
            from_g |= block << (w * hn);
        }
        for v in 0..hn {
            out.rows[u * hn + v] = from_g | (h.rows[v] << (u * hn));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Vertex sets
// ---------------------------------------------------------------------------

/// A sorted, duplicate-free set of vertex ids, validated against a host order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Sorts, rejects duplicates, and validates every id against
    /// `host_order`.
    pub fn new(mut ids: Vec<usize>, host_order: usize) -> Result<Self> {
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate vertex in set"));
        }
        if let Some(&max) = ids.last() {
            if max >= host_order {
                return Err(Error::invalid(format!(
                    "vertex {max} out of range for order {host_order}"
                )));
            }
        }
        Ok(VertexSet(ids))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    fn check_against(&self, host_order: usize) -> Result<()> {
        match self.0.last() {
            Some(&max) if max >= host_order => Err(Error::invalid(format!(
                "vertex {max} out of range for order {host_order}"
            ))),
            _ => Ok(()),
        }
    }
}
