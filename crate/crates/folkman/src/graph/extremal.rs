//! Exact extremal subset searches used by the vertex-dropping constructions:
//! the largest induced K_t-free subset, and the largest union of two
//! independent sets.  Both are exhaustive branch-and-bound searches over
//! subsets, exact by construction, with a hard order budget.

use super::{iter_bits, Graph, VertexSet};
use crate::{Error, Result};

/// Order budget for the extremal searches.
pub const EXTREMAL_MAX_ORDER: usize = 32;

fn check_budget(g: &Graph) -> Result<()> {
    if g.order() > EXTREMAL_MAX_ORDER {
        return Err(Error::BudgetExceeded {
            what: "graph order for extremal subset search",
            limit: EXTREMAL_MAX_ORDER,
            actual: g.order(),
            hint: None,
        });
    }
    Ok(())
}

/// Does the subgraph induced on `mask` contain a clique of size `k`?
fn mask_has_clique(g: &Graph, mask: u128, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if (mask.count_ones() as usize) < k {
        return false;
    }
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= !(1u128 << v);
        // Only look above v so each clique is tried once.
        if mask_has_clique(g, rest & g.neighbors(v), k - 1) {
            return true;
        }
    }
    false
}

/// Largest vertex set inducing no `K_t`, as the lexicographically least
/// maximum set.  `t = 2` asks for the largest independent set.
///
/// Two passes: the first finds the maximum size, the second re-runs the
/// include-first search and stops at the first set of that size, which the
/// include-first visit order makes the lexicographically least one.
pub fn max_induced_clique_free(g: &Graph, t: usize) -> Result<VertexSet> {
    check_budget(g)?;
    if t == 0 {
        return Err(Error::invalid("clique size t must be at least 1"));
    }
    if t == 1 {
        // Every vertex is a K_1, so only the empty set qualifies.
        return VertexSet::new(vec![], g.order());
    }
    let n = g.order();

    #[allow(clippy::too_many_arguments)]
    fn search(
        g: &Graph,
        t: usize,
        pos: usize,
        picked: u128,
        size: usize,
        best: &mut usize,
        stop_at: Option<usize>,
        out: &mut Option<u128>,
    ) -> bool {
        if let Some(goal) = stop_at {
            if size == goal {
                *out = Some(picked);
                return true;
            }
        }
        let n = g.order();
        if pos == n {
            if size > *best {
                *best = size;
            }
            return false;
        }
        let limit = stop_at.unwrap_or_else(|| *best + 1);
        if size + (n - pos) < limit {
            return false;
        }
        // Include pos first: keeps the visit order lexicographic over sets.
        // Adding pos is legal unless it completes a K_t with picked vertices,
        // i.e. its picked neighborhood contains a K_{t-1}.
        if !mask_has_clique(g, picked & g.neighbors(pos), t - 1)
            && search(g, t, pos + 1, picked | 1 << pos, size + 1, best, stop_at, out)
        {
            return true;
        }
        search(g, t, pos + 1, picked, size, best, stop_at, out)
    }

    let mut best = 0;
    search(g, t, 0, 0, 0, &mut best, None, &mut None);
    let mut out = None;
    search(g, t, 0, 0, 0, &mut 0, Some(best), &mut out);
    let mask = out.expect("a set of the maximum size exists");
    VertexSet::new(iter_bits(mask).collect(), n)
}

/// Size of the largest `A ∪ B` with both `A` and `B` independent sets
/// (equivalently, the largest induced 2-colorable vertex set).
pub fn max_union_two_independent_sets(g: &Graph) -> Result<usize> {
    check_budget(g)?;

    fn search(g: &Graph, pos: usize, a: u128, b: u128, size: usize, best: &mut usize) {
        if pos == g.order() {
            if size > *best {
                *best = size;
            }
            return;
        }
        if size + (g.order() - pos) <= *best {
            return;
        }
        let nb = g.neighbors(pos);
        if a & nb == 0 {
            search(g, pos + 1, a | 1 << pos, b, size + 1, best);
        }
        // While both classes are empty the two color choices are symmetric,
        // so the first colored vertex goes to A only.
        if (a | b) != 0 && b & nb == 0 {
            search(g, pos + 1, a, b | 1 << pos, size + 1, best);
        }
        search(g, pos + 1, a, b, size, best);
    }

    let mut best = 0;
    search(g, 0, 0, 0, 0, &mut best);
    Ok(best)
}
