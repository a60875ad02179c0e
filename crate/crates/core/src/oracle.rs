//! Brute-force reference implementations.
//!
//! Nothing here shares code with the contraction-based decoders except the
//! graph types (and `naive_next`, which by definition re-runs [`opt`] once
//! per deleted edge).

use std::cmp::Ordering;

use crate::contraction::{opt, opt_constrained};
use crate::error::{Error, Result};
use crate::graph::{Arborescence, ConstraintSet, Graph, NodeId, ROOT};
use crate::second_best::SwapCandidate;

/// Largest number of non-root nodes [`enumerate_all`] accepts.
pub const ENUMERATION_LIMIT: usize = 10;

/// Order of oracle output: heavier first, then lexicographically smaller
/// parent vectors.
pub fn oracle_order(a: &Arborescence, b: &Arborescence) -> Ordering {
    b.weight()
        .total_cmp(&a.weight())
        .then_with(|| a.parents().cmp(b.parents()))
}

/// Every arborescence of `g` (only dependency trees when `dep`), sorted by
/// [`oracle_order`].
pub fn enumerate_all(g: &Graph, dep: bool) -> Result<Vec<Arborescence>> {
    let n = g.node_count();
    if n - 1 > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            nodes: n - 1,
            limit: ENUMERATION_LIMIT,
        });
    }
    let candidates: Vec<Vec<NodeId>> = (0..n).map(|v| g.incoming(v).map(|e| e.tail).collect()).collect();
    let mut parent = vec![None; n];
    let mut out = Vec::new();
    assign(g, dep, 1, &candidates, &mut parent, &mut out);
    out.sort_by(oracle_order);
    Ok(out)
}

fn assign(
    g: &Graph,
    dep: bool,
    v: NodeId,
    candidates: &[Vec<NodeId>],
    parent: &mut Vec<Option<NodeId>>,
    out: &mut Vec<Arborescence>,
) {
    if v == parent.len() {
        let root_children = parent.iter().filter(|p| **p == Some(ROOT)).count();
        if !dep || parent.len() == 1 || root_children == 1 {
            out.push(Arborescence::from_parents_unchecked(g, parent.clone()));
        }
        return;
    }
    for &p in &candidates[v] {
        if closes_cycle(parent, v, p) {
            continue;
        }
        parent[v] = Some(p);
        assign(g, dep, v + 1, candidates, parent, out);
        parent[v] = None;
    }
}

/// Whether giving `v` the parent `p` closes a cycle among assigned nodes.
fn closes_cycle(parent: &[Option<NodeId>], v: NodeId, p: NodeId) -> bool {
    let mut x = p;
    loop {
        if x == v {
            return true;
        }
        match parent[x] {
            Some(up) => x = up,
            None => return false,
        }
    }
}

/// Best tree plus the best single-edge deletion, found by deleting each
/// tree edge in turn and re-decoding. Quadratically more decodes than
/// [`crate::next`]; used as its reference and as a benchmark baseline.
pub fn naive_next(g: &Graph) -> Result<(Arborescence, Option<SwapCandidate>)> {
    naive_next_constrained(g, &ConstraintSet::default())
}

pub fn naive_next_constrained(g: &Graph, c: &ConstraintSet) -> Result<(Arborescence, Option<SwapCandidate>)> {
    let best = if c.is_empty() {
        opt(g, false)?
    } else {
        opt_constrained(g, c, false)?
    };
    let mut candidate: Option<SwapCandidate> = None;
    for edge in best.edge_ids(g).into_iter().filter(|e| !c.included.contains(e)) {
        match opt_constrained(g, &c.with_excluded(edge), false) {
            Ok(t) => {
                let cand = SwapCandidate {
                    weight: t.weight(),
                    edge,
                };
                if candidate.is_none_or(|b| cand.outranks(&b)) {
                    candidate = Some(cand);
                }
            }
            Err(Error::NoTree) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((best, candidate))
}
