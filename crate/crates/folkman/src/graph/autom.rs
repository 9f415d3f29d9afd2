//! Automorphism counting and isomorphism testing.
//!
//! Both operations run iterated degree refinement (1-dimensional
//! Weisfeiler-Leman) to split vertices into classes, then backtrack over
//! class-respecting bijections.  Exact and deterministic; the cost grows with
//! the number of automorphisms, so the order budget is deliberately small.

use super::{iter_bits, Graph};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// Order budget for [`automorphism_count`] and [`is_isomorphic`].
pub const AUTOMORPHISM_MAX_ORDER: usize = 32;

fn check_budget(g: &Graph) -> Result<()> {
    if g.order() > AUTOMORPHISM_MAX_ORDER {
        return Err(Error::BudgetExceeded {
            what: "graph order for automorphism search",
            limit: AUTOMORPHISM_MAX_ORDER,
            actual: g.order(),
            hint: None,
        });
    }
    Ok(())
}

/// Joint iterated degree refinement of two graphs.  The returned class ids
/// are comparable across the pair: vertices can only correspond under an
/// isomorphism if they end up with equal ids.
fn joint_refinement(g: &Graph, h: &Graph) -> (Vec<u32>, Vec<u32>) {
    let mut cg: Vec<u32> = (0..g.order()).map(|v| g.degree(v) as u32).collect();
    let mut ch: Vec<u32> = (0..h.order()).map(|v| h.degree(v) as u32).collect();
    // n rounds always reach the stable partition (each round can only split).
    for _ in 0..g.order().max(h.order()) {
        let sig = |graph: &Graph, colors: &[u32], v: usize| {
            let mut ns: Vec<u32> = iter_bits(graph.neighbors(v)).map(|u| colors[u]).collect();
            ns.sort_unstable();
            (colors[v], ns)
        };
        let sigs_g: Vec<_> = (0..g.order()).map(|v| sig(g, &cg, v)).collect();
        let sigs_h: Vec<_> = (0..h.order()).map(|v| sig(h, &ch, v)).collect();
        // Dense ids assigned by sorted signature order, for determinism.
        let mut table: BTreeMap<&(u32, Vec<u32>), u32> = BTreeMap::new();
        for s in sigs_g.iter().chain(sigs_h.iter()) {
            table.insert(s, 0);
        }
        for (i, (_, id)) in table.iter_mut().enumerate() {
            *id = i as u32;
        }
        cg = sigs_g.iter().map(|s| table[s]).collect();
        ch = sigs_h.iter().map(|s| table[s]).collect();
    }
    (cg, ch)
}

/// Backtrack over all color-respecting adjacency-preserving bijections
/// `g -> h`, invoking `found` per completion; `found` returns `true` to stop.
#[allow(clippy::too_many_arguments)]
fn map_search(
    g: &Graph,
    h: &Graph,
    cg: &[u32],
    ch: &[u32],
    order: &[usize],
    image: &mut Vec<(usize, usize)>,
    used: &mut u128,
    found: &mut impl FnMut() -> bool,
) -> bool {
    let Some(&v) = order.get(image.len()) else {
        return found();
    };
    for w in 0..h.order() {
        if *used >> w & 1 == 1 || ch[w] != cg[v] {
            continue;
        }
        // An isomorphism preserves adjacency in both directions.
        if image
            .iter()
            .any(|&(u, iu)| g.has_edge(v, u) != h.has_edge(w, iu))
        {
            continue;
        }
        image.push((v, w));
        *used |= 1 << w;
        let stop = map_search(g, h, cg, ch, order, image, used, found);
        *used &= !(1u128 << w);
        image.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Vertex processing order: smallest refinement class first (fail-first),
/// ties by id.
fn search_order(colors: &[u32]) -> Vec<usize> {
    let mut class_size: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in colors {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..colors.len()).collect();
    order.sort_by_key(|&v| (class_size[&colors[v]], colors[v], v));
    order
}

/// Exact order of the automorphism group, by exhaustive backtracking.
///
/// Requires order <= [`AUTOMORPHISM_MAX_ORDER`]; note the runtime is at
/// least proportional to the group order itself, so highly symmetric graphs
/// (e.g. large edgeless ones) are intentionally out of scope.
pub fn automorphism_count(g: &Graph) -> Result<u64> {
    check_budget(g)?;
    if g.order() == 0 {
        return Ok(1);
    }
    let (cg, ch) = joint_refinement(g, g);
    let order = search_order(&cg);
    let mut count = 0u64;
    map_search(
        g,
        g,
        &cg,
        &ch,
        &order,
        &mut Vec::new(),
        &mut 0,
        &mut || {
            count += 1;
            false
        },
    );
    Ok(count)
}

/// Exact isomorphism test; both orders must be within
/// [`AUTOMORPHISM_MAX_ORDER`].
pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool> {
    check_budget(g)?;
    check_budget(h)?;
    if g.order() != h.order() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let (cg, ch) = joint_refinement(g, h);
    // Class histograms must agree before any search is worthwhile.
    let hist = |c: &[u32]| {
        let mut m: BTreeMap<u32, usize> = BTreeMap::new();
        for &x in c {
            *m.entry(x).or_default() += 1;
        }
        m
    };
    if hist(&cg) != hist(&ch) {
        return Ok(false);
    }
    let order = search_order(&cg);
    Ok(map_search(
        g,
        h,
        &cg,
        &ch,
        &order,
        &mut Vec::new(),
        &mut 0,
        &mut || true,
    ))
}
