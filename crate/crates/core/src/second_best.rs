//! The best tree together with the single edge whose removal yields the
//! second-best tree, computed in the same contraction pass as the best tree.

use crate::contraction::{reduce, DecodeTrace, DenseGraph, LevelTree, Reduction};
use crate::error::{Error, Result};
use crate::graph::{Arborescence, ConstraintSet, EdgeId, Graph, NodeId, ROOT};

/// Weight of the second-best tree and the edge to delete to obtain it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwapCandidate {
    pub weight: f64,
    pub edge: EdgeId,
}

impl SwapCandidate {
    /// Heavier first; equal weights go to the smaller edge id.
    pub fn outranks(&self, other: &SwapCandidate) -> bool {
        self.weight > other.weight || (self.weight == other.weight && self.edge < other.edge)
    }
}

pub(crate) fn better(a: Option<SwapCandidate>, b: Option<SwapCandidate>) -> Option<SwapCandidate> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.outranks(&x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Edges that can replace `target` in a tree: same head, no heavier, and
/// the swap leaves a tree.
#[derive(Clone, Debug, PartialEq)]
pub struct BlueSet {
    pub target: EdgeId,
    pub alternatives: Vec<EdgeId>,
}

/// Pre/post visit times of a tree, for constant-time ancestry queries.
struct Ancestry {
    enter: Vec<usize>,
    leave: Vec<usize>,
}

impl Ancestry {
    /// `parent` maps each node to its parent; `None` marks the root and
    /// nodes outside the tree.
    fn new(parent: &[Option<NodeId>]) -> Self {
        let n = parent.len();
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                children[p].push(v);
            }
        }
        let mut enter = vec![usize::MAX; n];
        let mut leave = vec![0; n];
        let mut clock = 0;
        let mut stack = vec![(ROOT, 0usize)];
        enter[ROOT] = clock;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&c) = children[v].get(*next) {
                *next += 1;
                clock += 1;
                enter[c] = clock;
                stack.push((c, 0));
            } else {
                leave[v] = clock;
                stack.pop();
            }
        }
        Ancestry { enter, leave }
    }

    /// True when `u` lies in the subtree of `v` (including `v` itself).
    fn in_subtree(&self, u: NodeId, v: NodeId) -> bool {
        self.enter[u] != usize::MAX && self.enter[v] <= self.enter[u] && self.leave[u] <= self.leave[v]
    }
}

fn tree_edge(g: &Graph, d: &Arborescence, e: EdgeId) -> Result<(NodeId, NodeId, f64)> {
    let edge = g.edge(e).ok_or(Error::UnknownEdge(e))?;
    if !d.contains_edge(edge) {
        return Err(Error::UnknownEdge(e));
    }
    Ok((edge.tail, edge.head, edge.weight))
}

/// Blue edges of tree edge `e` in `d`. Errors if `e` is not an edge of `d`.
pub fn blue_edges(g: &Graph, d: &Arborescence, e: EdgeId) -> Result<BlueSet> {
    let (tail, head, weight) = tree_edge(g, d, e)?;
    let ancestry = Ancestry::new(d.parents());
    let alternatives = g
        .incoming(head)
        .filter(|alt| alt.tail != tail && alt.weight <= weight && !ancestry.in_subtree(alt.tail, head))
        .map(|alt| alt.id)
        .collect();
    Ok(BlueSet {
        target: e,
        alternatives,
    })
}

/// Smallest weight loss from swapping `e` for one of its blue edges;
/// infinite when there is none.
pub fn swap_cost(g: &Graph, d: &Arborescence, e: EdgeId) -> Result<f64> {
    let (_, _, weight) = tree_edge(g, d, e)?;
    let blue = blue_edges(g, d, e)?;
    Ok(blue
        .alternatives
        .iter()
        .map(|&alt| weight - g.edge(alt).expect("blue edge exists").weight)
        .fold(f64::INFINITY, f64::min))
}

/// Cheapest swap among the tree arcs entering `heads`, for a tree over the
/// active nodes of `dg`.
fn best_swap(dg: &DenseGraph, tree: &LevelTree, heads: impl Iterator<Item = NodeId>) -> Option<SwapCandidate> {
    let parents: Vec<Option<NodeId>> = (0..dg.node_bound())
        .map(|v| {
            if dg.is_active(v) {
                tree.arc(v).map(|a| a.tail)
            } else {
                None
            }
        })
        .collect();
    let ancestry = Ancestry::new(&parents);
    let mut best: Option<(f64, EdgeId)> = None;
    for j in heads {
        let arc = tree.arc(j).expect("every active non-root node has a parent");
        let Some(alt) = dg.best_alternative(j, arc.edge, |u| !ancestry.in_subtree(u, j)) else {
            continue;
        };
        if alt.weight > arc.weight {
            continue;
        }
        let cost = arc.weight - alt.weight;
        if best.is_none_or(|(c, e)| cost < c || (cost == c && arc.edge < e)) {
            best = Some((cost, arc.edge));
        }
    }
    best.map(|(cost, edge)| SwapCandidate {
        weight: tree.weight() - cost,
        edge,
    })
}

/// The best tree of `g` and the edge whose deletion gives the second-best
/// tree (`None` when `g` has a single tree).
pub fn next(g: &Graph) -> Result<(Arborescence, Option<SwapCandidate>)> {
    next_constrained(g, &ConstraintSet::default())
}

/// [`next`] on `apply_constraints(g, c)`.
pub fn next_constrained(g: &Graph, c: &ConstraintSet) -> Result<(Arborescence, Option<SwapCandidate>)> {
    next_traced(g, c).map(|(tree, cand, _)| (tree, cand))
}

pub fn next_traced(g: &Graph, c: &ConstraintSet) -> Result<(Arborescence, Option<SwapCandidate>, DecodeTrace)> {
    let mut dg = DenseGraph::with_constraints(g, c);
    let Reduction { mut tree, records } = reduce(&mut dg, false)?;

    // base case: the greedy graph is a tree
    let heads: Vec<NodeId> = dg.active_nodes().collect();
    let mut candidate = best_swap(&dg, &tree, heads.into_iter());

    for rec in records.iter().rev() {
        dg.stitch(&mut tree, rec)?;
        // the cycle arcs the stitched tree kept: all but the entry node's
        let kept = rec
            .cycle
            .iter()
            .zip(&rec.cycle_arcs)
            .filter(|(&v, arc)| tree.arc(v).map(|a| a.edge) == Some(arc.edge))
            .map(|(&v, _)| v);
        candidate = better(candidate, best_swap(&dg, &tree, kept));
    }
    Ok((tree.to_arborescence(g), candidate, DecodeTrace::from_records(&records)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::opt_traced;
    use crate::graph::tests::{example, id};

    fn best_example_tree(g: &Graph) -> Arborescence {
        Arborescence::from_parents(g, vec![None, Some(0), Some(0), Some(4), Some(2)]).unwrap()
    }

    #[test]
    fn blue_edges_of_example() {
        let g = example();
        let d = best_example_tree(&g);
        let blue = blue_edges(&g, &d, id(&g, 4, 3)).unwrap();
        assert_eq!(blue.alternatives, vec![id(&g, 1, 3), id(&g, 2, 3)]);
        assert!(blue_edges(&g, &d, id(&g, 2, 4)).unwrap().alternatives.is_empty());
        assert_eq!(
            blue_edges(&g, &d, id(&g, 0, 1)).unwrap().alternatives,
            vec![id(&g, 4, 1)]
        );
    }

    #[test]
    fn blue_edges_exclude_descendants() {
        // in the 260 tree node 2 has descendants 4 and 3, so 3 -> 2 is red
        let g = example();
        let d = best_example_tree(&g);
        assert!(blue_edges(&g, &d, id(&g, 0, 2)).unwrap().alternatives.is_empty());
    }

    #[test]
    fn blue_edges_need_a_tree_edge() {
        let g = example();
        let d = best_example_tree(&g);
        assert_eq!(blue_edges(&g, &d, id(&g, 1, 3)), Err(Error::UnknownEdge(id(&g, 1, 3))));
    }

    #[test]
    fn swap_costs_of_example() {
        let g = example();
        let d = best_example_tree(&g);
        assert_eq!(swap_cost(&g, &d, id(&g, 4, 3)).unwrap(), 40.0);
        assert_eq!(swap_cost(&g, &d, id(&g, 0, 1)).unwrap(), 70.0);
        assert_eq!(swap_cost(&g, &d, id(&g, 2, 4)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn next_of_example() {
        let g = example();
        let (best, cand) = next(&g).unwrap();
        assert_eq!(best.weight(), 260.0);
        assert_eq!(
            cand,
            Some(SwapCandidate {
                weight: 220.0,
                edge: id(&g, 4, 3)
            })
        );
    }

    #[test]
    fn next_with_unique_tree() {
        let g = example();
        let c = ConstraintSet::new(true)
            .with_included(id(&g, 0, 2))
            .with_included(id(&g, 4, 3));
        let (best, cand) = next_constrained(&g, &c).unwrap();
        assert_eq!(best.weight(), 190.0);
        assert_eq!(cand, None);

        let g = Graph::new(2, [(0, 1, 4.0)]).unwrap();
        let (best, cand) = next(&g).unwrap();
        assert_eq!(best.weight(), 4.0);
        assert_eq!(cand, None);
    }

    #[test]
    fn next_sees_parallel_entries_into_a_cycle() {
        // the runner-up re-enters the 2-cycle at the other node; a contraction
        // that kept a single arc per node pair would miss it
        let g = Graph::new(3, [(0, 1, 5.0), (0, 2, 4.0), (1, 2, 10.0), (2, 1, 10.0)]).unwrap();
        let (best, cand) = next(&g).unwrap();
        assert_eq!(best.weight(), 15.0);
        assert_eq!(
            cand,
            Some(SwapCandidate {
                weight: 14.0,
                edge: id(&g, 0, 1)
            })
        );
    }

    #[test]
    fn next_contracts_like_opt() {
        let g = example();
        let (_, _, trace) = next_traced(&g, &ConstraintSet::default()).unwrap();
        let (_, opt_trace) = opt_traced(&g, &ConstraintSet::default(), false).unwrap();
        assert_eq!(trace, opt_trace);
        assert_eq!(trace.cycles, vec![vec![2, 4, 3]]);
    }

    #[test]
    fn next_without_tree() {
        let g = Graph::new(3, [(1, 2, 1.0), (2, 1, 1.0)]).unwrap();
        assert_eq!(next(&g), Err(Error::NoTree));
    }
}
