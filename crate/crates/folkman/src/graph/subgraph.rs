//! Subgraph containment by backtracking embedding search.
//!
//! Embeddings are injective maps pattern -> host preserving pattern edges
//! (not necessarily induced: host edges between images of pattern non-edges
//! are fine).  Candidates are pruned by degree and by adjacency to the
//! already-mapped pattern neighbors, with all sets held as bitmasks.

use super::{iter_bits, Graph};
use crate::{Error, Result};

/// Pattern-order budget for [`contains_subgraph`].
pub const SUBGRAPH_PATTERN_MAX: usize = 12;

/// Does `host` contain a (not necessarily induced) copy of `pattern`?
///
/// On success returns the lexicographically least embedding as a sequence:
/// entry `i` is the host vertex carrying pattern vertex `i`, and the sequence
/// `(img[0], img[1], ...)` is minimal among all embeddings.
pub fn contains_subgraph(host: &Graph, pattern: &Graph) -> Result<Option<Vec<usize>>> {
    if pattern.order() > SUBGRAPH_PATTERN_MAX {
        return Err(Error::BudgetExceeded {
            what: "pattern order for subgraph search",
            limit: SUBGRAPH_PATTERN_MAX,
            actual: pattern.order(),
            hint: None,
        });
    }
    let order: Vec<usize> = (0..pattern.order()).collect();
    let mut found = None;
    enumerate_embeddings(host, pattern, &order, &mut |img| {
        found = Some(img.to_vec());
        true
    });
    Ok(found)
}

/// Backtrack over every embedding of `pattern` into `host`, mapping pattern
/// vertices in the given `order` (a permutation of `0..pattern.order()`).
/// `visit` receives the image indexed by pattern vertex and returns `true`
/// to stop the search; the return value reports whether a visit stopped it.
///
/// Candidates at each position are tried in ascending host-vertex order, so
/// with the natural order the first embedding found is lexicographically
/// least.
pub fn enumerate_embeddings(
    host: &Graph,
    pattern: &Graph,
    order: &[usize],
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let p = pattern.order();
    debug_assert_eq!(order.len(), p);
    if p > host.order() {
        return false;
    }
    // deg_ok[pv]: host vertices with enough degree to carry pattern vertex pv.
    let deg_ok: Vec<u128> = (0..p)
        .map(|pv| {
            let need = pattern.degree(pv);
            (0..host.order())
                .filter(|&w| host.degree(w) >= need)
                .fold(0u128, |m, w| m | 1 << w)
        })
        .collect();
    // back[pos]: pattern neighbors of order[pos] mapped at earlier positions.
    let back: Vec<Vec<usize>> = (0..p)
        .map(|pos| {
            order[..pos]
                .iter()
                .copied()
                .filter(|&prev| pattern.has_edge(order[pos], prev))
                .collect()
        })
        .collect();
    let mut img = vec![usize::MAX; p];
    let mut used = 0u128;
    go(host, order, &deg_ok, &back, 0, &mut img, &mut used, visit)
}

#[allow(clippy::too_many_arguments)]
fn go(
    host: &Graph,
    order: &[usize],
    deg_ok: &[u128],
    back: &[Vec<usize>],
    pos: usize,
    img: &mut Vec<usize>,
    used: &mut u128,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if pos == order.len() {
        return visit(img);
    }
    let pv = order[pos];
    let mut cand = deg_ok[pv] & !*used;
    for &prev in &back[pos] {
        cand &= host.neighbors(img[prev]);
    }
    for w in iter_bits(cand) {
        img[pv] = w;
        *used |= 1 << w;
        let stop = go(host, order, deg_ok, back, pos + 1, img, used, visit);
        *used &= !(1u128 << w);
        img[pv] = usize::MAX;
        if stop {
            return true;
        }
    }
    false
}
