//! Exhaustive arrowing decisions with certificates.
//!
//! `G → (H₁,…,H_r)^v` means every r-coloring of the vertices of `G` leaves a
//! monochromatic copy of `Hᵢ` in some color `i`; the `^e` variant colors
//! edges.  This module decides arrowing by a pruned backtracking search over
//! total colorings, produces a lexicographically least counterexample
//! coloring when the answer is `NotArrows`, and re-verifies such witnesses
//! through an independent code path.
//!
//! The searchable state is a *copy list*: for vertex colorings only the
//! vertex set of a potential monochromatic copy matters, so copies are
//! deduplicated by vertex set; for edge colorings, by edge set.  All copy
//! masks fit in a `u128`, which caps the colored-element count at 128; the
//! practical exhaustive budgets are far below that and anything bigger
//! belongs to the SAT path.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graph::{
    clique_number, contains_subgraph, enumerate_embeddings, induced_on_mask, is_isomorphic, Graph,
};
use crate::{Error, Result};

/// Largest pattern order accepted by [`enumerate_copies`].
pub const COPY_PATTERN_MAX: usize = 8;

/// Whether vertices or edges receive colors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Vertex,
    Edge,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Vertex => "vertex",
            Mode::Edge => "edge",
        })
    }
}

/// Result of an arrowing decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Arrows,
    NotArrows,
}

/// How a verdict was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Pruned backtracking over all total colorings.
    Exhaustive,
    /// Embedded CNF solver.
    Sat,
    /// External CNF solver; UNSAT answers are taken on the solver's word.
    External,
}

/// One arrowing question: does `host → (targets)^mode`?
#[derive(Clone, Debug)]
pub struct ArrowingProblem {
    pub host: Graph,
    pub mode: Mode,
    pub targets: Vec<Graph>,
    /// Optional `s` for Folkman-set membership: the host is additionally
    /// required to be `K_s`-free.  Ignored by the arrowing checks themselves.
    pub forbidden_clique: Option<usize>,
}

impl ArrowingProblem {
    /// Validates and builds a problem.
    ///
    /// Requirements: at least two targets; every target has order ≥ 2 and no
    /// isolated vertex (arrowing semantics for isolated target vertices is a
    /// convention we refuse to guess); if `forbidden_clique = s` is set, `s`
    /// must exceed the order of every complete target, otherwise no `K_s`-free
    /// host could ever contain the required monochromatic copy.
    pub fn new(
        host: Graph,
        mode: Mode,
        targets: Vec<Graph>,
        forbidden_clique: Option<usize>,
    ) -> Result<Self> {
        if targets.len() < 2 {
            return Err(Error::invalid(format!(
                "an arrowing problem needs at least 2 targets, got {}",
                targets.len()
            )));
        }
        for (i, t) in targets.iter().enumerate() {
            if t.order() < 2 {
                return Err(Error::invalid(format!(
                    "target {i} has order {} but arrowing is only defined here for targets of order >= 2",
                    t.order()
                )));
            }
            if t.min_degree() == 0 {
                return Err(Error::invalid(format!(
                    "target {i} has an isolated vertex; such targets are rejected rather than \
                     given ad-hoc semantics"
                )));
            }
        }
        if let Some(s) = forbidden_clique {
            if s < 2 {
                return Err(Error::invalid("forbidden clique order must be >= 2"));
            }
            for t in &targets {
                let n = t.order();
                if t.edge_count() == n * (n - 1) / 2 && s <= n {
                    return Err(Error::invalid(format!(
                        "forbidden clique K{s} does not exceed complete target K{n}; \
                         no K{s}-free graph can arrow it"
                    )));
                }
            }
        }
        Ok(Self {
            host,
            mode,
            targets,
            forbidden_clique,
        })
    }

    /// Number of colors `r`.
    pub fn color_count(&self) -> usize {
        self.targets.len()
    }

    /// Number of colored elements: vertices or edges of the host.
    pub fn element_count(&self) -> usize {
        match self.mode {
            Mode::Vertex => self.host.order(),
            Mode::Edge => self.host.edge_count(),
        }
    }

    /// True when all targets are pairwise isomorphic, i.e. the target list is
    /// invariant under every color permutation.  This is the condition under
    /// which the engine may pin the first element's color.
    pub fn targets_interchangeable(&self) -> Result<bool> {
        for pair in self.targets.windows(2) {
            if !is_isomorphic(&pair[0], &pair[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Exhaustive-search size limits.  These are configuration, not hard
/// constants: exceeding them is an error telling the caller to raise the
/// budget or switch to the SAT path.  The absolute ceiling is 128 elements
/// (copy masks are 128-bit).
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_vertex_elements: usize,
    pub max_edge_elements: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_vertex_elements: 26,
            max_edge_elements: 24,
        }
    }
}

impl SearchBudget {
    /// Same limit for both modes.
    pub fn uniform(limit: usize) -> Self {
        Self {
            max_vertex_elements: limit,
            max_edge_elements: limit,
        }
    }
}

/// Search-effort counters attached to every verdict.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Color assignments attempted during backtracking, or solver conflicts
    /// for SAT verdicts.
    pub nodes: u64,
    /// Total deduplicated copies across all targets.
    pub copies: usize,
    /// Wall-clock time.  Carried on the in-memory verdict only; certificate
    /// files omit it so that identical runs stay byte-identical.
    #[serde(skip)]
    pub wall_ms: u64,
}

/// The answer to an [`ArrowingProblem`], with enough metadata to audit it.
#[derive(Clone, Debug)]
pub struct ArrowingVerdict {
    pub outcome: Outcome,
    /// Lexicographically least good total coloring iff `NotArrows`; one color
    /// index per element (vertices in id order, edges in lexicographic order).
    pub witness: Option<Vec<u8>>,
    pub method: Method,
    /// True when the search pinned the first element's color (sound only
    /// because the targets were pairwise isomorphic; recorded so auditors can
    /// see the assumption).  Witness verification never depends on it.
    pub symmetry_breaking: bool,
    pub stats: SearchStats,
}

/// Deduplicated monochromatic-containment obligations for one pattern.
#[derive(Clone, Debug)]
pub struct CopyList {
    pub mode: Mode,
    /// graph6 of the pattern these copies realize.
    pub pattern_id: String,
    /// Element-index bitmasks, strictly ascending.  Vertex mode: the vertex
    /// sets spanned by a copy; edge mode: the edge sets (indices into the
    /// host's lexicographic edge list) forming a copy.
    pub masks: Vec<u128>,
}

impl CopyList {
    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// Independently re-checks every listed copy against the host: a vertex
    /// copy must span the pattern inside its induced subgraph, an edge copy
    /// must form a graph isomorphic to the pattern.
    pub fn reverify(&self, host: &Graph, pattern: &Graph) -> Result<bool> {
        let host_edges = host.edges();
        for &mask in &self.masks {
            match self.mode {
                Mode::Vertex => {
                    if mask.count_ones() as usize != pattern.order() {
                        return Ok(false);
                    }
                    let sub = induced_on_mask(host, mask)?;
                    if contains_subgraph(&sub, pattern)?.is_none() {
                        return Ok(false);
                    }
                }
                Mode::Edge => {
                    if mask.count_ones() as usize != pattern.edge_count() {
                        return Ok(false);
                    }
                    let formed = graph_formed_by_edges(host.order(), &host_edges, mask)?;
                    if !is_isomorphic(&formed, pattern)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Builds the graph consisting of the selected host edges, restricted to the
/// vertices they touch (relabeled consecutively).
fn graph_formed_by_edges(
    host_order: usize,
    host_edges: &[(usize, usize)],
    mask: u128,
) -> Result<Graph> {
    let mut used = vec![false; host_order];
    let mut picked = Vec::new();
    for (i, &(u, v)) in host_edges.iter().enumerate() {
        if mask >> i & 1 == 1 {
            used[u] = true;
            used[v] = true;
            picked.push((u, v));
        }
    }
    let mut relabel = vec![usize::MAX; host_order];
    let mut next = 0;
    for v in 0..host_order {
        if used[v] {
            relabel[v] = next;
            next += 1;
        }
    }
    let mut g = Graph::new(next)?;
    for (u, v) in picked {
        g.add_edge(relabel[u], relabel[v])?;
    }
    Ok(g)
}

/// Enumerates every copy of `pattern` inside `host`, deduplicated by the
/// element set that matters for monochromatic containment: vertex sets in
/// vertex mode (two copies on the same vertices impose the same coloring
/// constraint), edge sets in edge mode.
pub fn enumerate_copies(host: &Graph, pattern: &Graph, mode: Mode) -> Result<CopyList> {
    if pattern.order() > COPY_PATTERN_MAX {
        return Err(Error::BudgetExceeded {
            what: "copy-enumeration pattern order",
            limit: COPY_PATTERN_MAX,
            actual: pattern.order(),
            hint: None,
        });
    }
    if pattern.order() == 0 {
        return Err(Error::invalid("cannot enumerate copies of the empty pattern"));
    }
    if mode == Mode::Edge && pattern.min_degree() == 0 {
        return Err(Error::invalid(
            "edge-mode copies are undefined for patterns with isolated vertices",
        ));
    }
    let edge_index = match mode {
        Mode::Vertex => Vec::new(),
        Mode::Edge => {
            let mut idx = vec![usize::MAX; host.order() * host.order()];
            for (i, (u, v)) in host.edges().into_iter().enumerate() {
                idx[u * host.order() + v] = i;
                idx[v * host.order() + u] = i;
            }
            idx
        }
    };
    let pattern_edges = pattern.edges();
    let natural: Vec<usize> = (0..pattern.order()).collect();
    let mut seen = std::collections::BTreeSet::new();
    enumerate_embeddings(host, pattern, &natural, &mut |phi| {
        let mask = match mode {
            Mode::Vertex => phi.iter().fold(0u128, |m, &v| m | 1u128 << v),
            Mode::Edge => pattern_edges.iter().fold(0u128, |m, &(a, b)| {
                m | 1u128 << edge_index[phi[a] * host.order() + phi[b]]
            }),
        };
        seen.insert(mask);
        false
    });
    Ok(CopyList {
        mode,
        pattern_id: crate::graph::to_graph6(pattern),
        masks: seen.into_iter().collect(),
    })
}

/// Precomputed search state shared by both phases.
struct SearchSpace {
    element_count: usize,
    color_count: usize,
    /// Copy masks per color.
    copies: Vec<Vec<u128>>,
    /// `per_element[c][e]` = indices into `copies[c]` of copies containing `e`.
    per_element: Vec<Vec<Vec<u32>>>,
}

impl SearchSpace {
    fn build(problem: &ArrowingProblem) -> Result<(Self, usize)> {
        let mut copies = Vec::with_capacity(problem.targets.len());
        for t in &problem.targets {
            copies.push(enumerate_copies(&problem.host, t, problem.mode)?.masks);
        }
        let m = problem.element_count();
        let r = problem.targets.len();
        let mut per_element = vec![vec![Vec::new(); m]; r];
        for (c, list) in copies.iter().enumerate() {
            for (i, &mask) in list.iter().enumerate() {
                for e in crate::graph::iter_bits(mask) {
                    per_element[c][e].push(i as u32);
                }
            }
        }
        let total: usize = copies.iter().map(Vec::len).sum();
        Ok((
            Self {
                element_count: m,
                color_count: r,
                copies,
                per_element,
            },
            total,
        ))
    }

    /// Static search order: elements by descending copy participation, ties by
    /// ascending id.  Front-loading contested elements makes contradictions
    /// appear near the root.
    fn heuristic_order(&self) -> Vec<usize> {
        let mut participation = vec![0usize; self.element_count];
        for color in &self.per_element {
            for (e, list) in color.iter().enumerate() {
                participation[e] += list.len();
            }
        }
        let mut order: Vec<usize> = (0..self.element_count).collect();
        order.sort_by_key(|&e| (std::cmp::Reverse(participation[e]), e));
        order
    }

    /// Depth-first search for a good total coloring (no copy monochromatic),
    /// assigning elements along `order` and trying colors in ascending order.
    /// Returns the coloring found, if any.  When `pin_first` is set the
    /// element at `order[0]` only tries color 0.
    ///
    /// Pruning only discards partial colorings that already completed a
    /// monochromatic copy, so every prefix of a good coloring survives; with
    /// the identity order this makes the first coloring found the
    /// lexicographically least good one.
    fn search(&self, order: &[usize], pin_first: bool, nodes: &mut u64) -> Option<Vec<u8>> {
        let mut assignment = vec![0u8; self.element_count];
        let mut colored = vec![0u128; self.color_count];
        if self.dfs(order, 0, pin_first, &mut assignment, &mut colored, nodes) {
            Some(assignment)
        } else {
            None
        }
    }

    fn dfs(
        &self,
        order: &[usize],
        depth: usize,
        pin_first: bool,
        assignment: &mut [u8],
        colored: &mut [u128],
        nodes: &mut u64,
    ) -> bool {
        if depth == self.element_count {
            return true;
        }
        let e = order[depth];
        let bit = 1u128 << e;
        let color_limit = if depth == 0 && pin_first {
            1
        } else {
            self.color_count
        };
        for c in 0..color_limit {
            *nodes += 1;
            let mask = colored[c] | bit;
            let completes_copy = self.per_element[c][e]
                .iter()
                .any(|&i| self.copies[c][i as usize] & !mask == 0);
            if completes_copy {
                continue;
            }
            colored[c] = mask;
            assignment[e] = c as u8;
            if self.dfs(order, depth + 1, pin_first, assignment, colored, nodes) {
                return true;
            }
            colored[c] &= !bit;
        }
        false
    }

    /// Parallel variant of the heuristic-order existence search: the coloring
    /// tree is split by the first few elements' colors and the chunks are
    /// scanned by `jobs` workers.  Only existence and the deterministic node
    /// count are reported; the lexicographically least witness is always
    /// recomputed sequentially afterwards, so results never depend on thread
    /// scheduling.
    fn search_exists_parallel(
        &self,
        order: &[usize],
        pin_first: bool,
        jobs: usize,
        nodes: &mut u64,
    ) -> bool {
        let prefix_len = std::cmp::min(
            self.element_count,
            (jobs.next_power_of_two().trailing_zeros() as usize) + 2,
        );
        let mut prefixes: Vec<Vec<u8>> = Vec::new();
        let mut partial = vec![0u8; prefix_len];
        self.collect_prefixes(order, 0, prefix_len, pin_first, &mut partial, &mut prefixes);
        let chunks: Vec<Vec<Vec<u8>>> = {
            let mut by_worker = vec![Vec::new(); jobs];
            for (i, p) in prefixes.into_iter().enumerate() {
                by_worker[i % jobs].push(p);
            }
            by_worker
        };
        let results: Vec<(bool, u64)> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        let mut local_nodes = 0u64;
                        let mut found = false;
                        for prefix in chunk {
                            if self.search_from_prefix(order, prefix, &mut local_nodes) {
                                found = true;
                                break;
                            }
                        }
                        (found, local_nodes)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker")).collect()
        });
        // Node totals differ from the sequential scan only by where the
        // early-exit lands; outcome never does.
        *nodes += results.iter().map(|&(_, n)| n).sum::<u64>();
        results.iter().any(|&(found, _)| found)
    }

    /// Enumerates all conflict-free colorings of the first `prefix_len`
    /// elements along `order`.
    fn collect_prefixes(
        &self,
        order: &[usize],
        depth: usize,
        prefix_len: usize,
        pin_first: bool,
        partial: &mut Vec<u8>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if depth == prefix_len {
            out.push(partial.clone());
            return;
        }
        let color_limit = if depth == 0 && pin_first {
            1
        } else {
            self.color_count
        };
        for c in 0..color_limit {
            partial[depth] = c as u8;
            if self.prefix_conflict_free(order, &partial[..=depth]) {
                self.collect_prefixes(order, depth + 1, prefix_len, pin_first, partial, out);
            }
        }
    }

    fn prefix_conflict_free(&self, order: &[usize], prefix: &[u8]) -> bool {
        let mut colored = vec![0u128; self.color_count];
        for (d, &c) in prefix.iter().enumerate() {
            colored[c as usize] |= 1u128 << order[d];
        }
        let d = prefix.len() - 1;
        let e = order[d];
        let c = prefix[d] as usize;
        self.per_element[c][e]
            .iter()
            .all(|&i| self.copies[c][i as usize] & !colored[c] != 0)
    }

    fn search_from_prefix(&self, order: &[usize], prefix: &[u8], nodes: &mut u64) -> bool {
        let mut assignment = vec![0u8; self.element_count];
        let mut colored = vec![0u128; self.color_count];
        for (d, &c) in prefix.iter().enumerate() {
            assignment[order[d]] = c;
            colored[c as usize] |= 1u128 << order[d];
        }
        self.dfs(order, prefix.len(), false, &mut assignment, &mut colored, nodes)
    }
}

fn check_budget(problem: &ArrowingProblem, budget: &SearchBudget) -> Result<()> {
    let (limit, what) = match problem.mode {
        Mode::Vertex => (budget.max_vertex_elements, "vertex-mode host order"),
        Mode::Edge => (budget.max_edge_elements, "edge-mode host edge count"),
    };
    let m = problem.element_count();
    if m > limit {
        return Err(Error::BudgetExceeded {
            what,
            limit,
            actual: m,
            hint: Some("raise the budget or use the SAT path (method=sat)".into()),
        });
    }
    if m > crate::graph::MAX_VERTICES {
        return Err(Error::BudgetExceeded {
            what: "colored element count (copy masks are 128-bit)",
            limit: crate::graph::MAX_VERTICES,
            actual: m,
            hint: Some("only the SAT path can color this many elements".into()),
        });
    }
    Ok(())
}

fn exhaustive_check(
    problem: &ArrowingProblem,
    budget: &SearchBudget,
    jobs: usize,
) -> Result<ArrowingVerdict> {
    check_budget(problem, budget)?;
    let start = Instant::now();
    let (space, total_copies) = SearchSpace::build(problem)?;
    let pin_first = space.element_count > 0 && problem.targets_interchangeable()?;
    let mut nodes = 0u64;

    // Phase 1: decide existence of a good coloring, contested elements first.
    let order = space.heuristic_order();
    let found = if jobs > 1 && space.element_count > 8 {
        space.search_exists_parallel(&order, pin_first, jobs, &mut nodes)
    } else {
        space.search(&order, pin_first, &mut nodes).is_some()
    };

    // Phase 2: if one exists, recover the lexicographically least good
    // coloring with an identity-order search.  Pinning the first element to
    // color 0 stays sound for lex-minimality: with pairwise-isomorphic
    // targets, relabeling colors turns any good coloring into one whose first
    // element has color 0 without increasing it lexicographically.
    let witness = if found {
        let identity: Vec<usize> = (0..space.element_count).collect();
        let w = space
            .search(&identity, pin_first, &mut nodes)
            .expect("existence was just established");
        Some(w)
    } else {
        None
    };

    Ok(ArrowingVerdict {
        outcome: if found { Outcome::NotArrows } else { Outcome::Arrows },
        witness,
        method: Method::Exhaustive,
        symmetry_breaking: pin_first,
        stats: SearchStats {
            nodes,
            copies: total_copies,
            wall_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// Decides `host → (targets)^v` by exhaustive search under the default budget.
pub fn vertex_arrowing_check(problem: &ArrowingProblem) -> Result<ArrowingVerdict> {
    vertex_arrowing_check_with(problem, &SearchBudget::default(), 1)
}

/// As [`vertex_arrowing_check`] with an explicit budget and worker count.
/// The verdict never depends on `jobs`.
pub fn vertex_arrowing_check_with(
    problem: &ArrowingProblem,
    budget: &SearchBudget,
    jobs: usize,
) -> Result<ArrowingVerdict> {
    if problem.mode != Mode::Vertex {
        return Err(Error::invalid("vertex_arrowing_check needs a vertex-mode problem"));
    }
    exhaustive_check(problem, budget, jobs.max(1))
}

/// Decides `host → (targets)^e` by exhaustive search under the default budget.
pub fn edge_arrowing_check(problem: &ArrowingProblem) -> Result<ArrowingVerdict> {
    edge_arrowing_check_with(problem, &SearchBudget::default(), 1)
}

/// As [`edge_arrowing_check`] with an explicit budget and worker count.
pub fn edge_arrowing_check_with(
    problem: &ArrowingProblem,
    budget: &SearchBudget,
    jobs: usize,
) -> Result<ArrowingVerdict> {
    if problem.mode != Mode::Edge {
        return Err(Error::invalid("edge_arrowing_check needs an edge-mode problem"));
    }
    exhaustive_check(problem, budget, jobs.max(1))
}

/// Checks a claimed `NotArrows` witness coloring against the problem, using
/// only the copy lists (never the search internals): true iff the coloring is
/// total, uses valid color indices, and leaves no copy of any target
/// monochromatic in its color.
pub fn verify_certificate(problem: &ArrowingProblem, witness: &[u8]) -> Result<bool> {
    let m = problem.element_count();
    if witness.len() != m {
        return Err(Error::BadCertificate(format!(
            "witness colors {} elements but the host has {m}",
            witness.len()
        )));
    }
    let r = problem.color_count();
    if let Some(&bad) = witness.iter().find(|&&c| c as usize >= r) {
        return Err(Error::BadCertificate(format!(
            "witness uses color {bad} but only {r} targets exist"
        )));
    }
    let mut colored = vec![0u128; r];
    for (e, &c) in witness.iter().enumerate() {
        colored[c as usize] |= 1u128 << e;
    }
    for (c, target) in problem.targets.iter().enumerate() {
        let copies = enumerate_copies(&problem.host, target, problem.mode)?;
        if copies.masks.iter().any(|&mask| mask & !colored[c] == 0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Folkman-set membership: `g` is `K_s`-free and arrows the targets.
pub fn folkman_membership(
    g: &Graph,
    targets: Vec<Graph>,
    s: usize,
    mode: Mode,
) -> Result<bool> {
    let problem = ArrowingProblem::new(g.clone(), mode, targets, Some(s))?;
    if clique_number(g) >= s {
        return Ok(false);
    }
    let verdict = exhaustive_check(&problem, &SearchBudget::default(), 1)?;
    Ok(verdict.outcome == Outcome::Arrows)
}
