//! K-best enumeration by partitioning the tree space.
//!
//! Each queued subproblem is a constraint set over the input graph's edges
//! together with the weight of its best tree that has not been reported yet.
//! Popping a swap item reports the best tree of the subproblem with its
//! candidate edge excluded, then splits the rest of the subproblem on that
//! edge. In dependency mode, root-exclusion items stand for "the best
//! dependency tree whose root edge differs from every reported one".

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::contraction::opt_constrained;
use crate::error::{Error, Result};
use crate::graph::{Arborescence, ConstraintSet, EdgeId, Graph, ROOT};
use crate::oracle::naive_next_constrained;
use crate::second_best::{next_constrained, SwapCandidate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BranchKind {
    /// Report the subproblem's best tree without `edge`.
    Swap,
    /// Report the best dependency tree of the subproblem whose root edge is
    /// not `edge`.
    RootExclusion,
}

#[derive(Clone, Debug)]
pub struct QueueItem {
    pub priority: f64,
    pub edge: EdgeId,
    pub constraints: ConstraintSet,
    pub kind: BranchKind,
    pub seq: u64,
}

impl PartialEq for QueueItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueItem {}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueItem {
    // max-heap: higher priority first, then earlier insertion
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// How the best-tree-plus-swap-candidate step is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NextStrategy {
    /// Swap candidate found during the one contraction pass.
    #[default]
    Integrated,
    /// Best tree, then one full re-decode per deleted tree edge.
    Naive,
}

/// Iterator over the trees of a graph in non-increasing weight order.
pub struct KBest<'g> {
    graph: &'g Graph,
    dep: bool,
    strategy: NextStrategy,
    queue: BinaryHeap<QueueItem>,
    seq: u64,
    first: Option<Arborescence>,
}

impl<'g> KBest<'g> {
    /// All arborescences of `g`.
    pub fn new(graph: &'g Graph) -> Result<Self> {
        Self::with_strategy(graph, NextStrategy::Integrated)
    }

    /// Dependency trees of `g` only.
    pub fn dependency(graph: &'g Graph) -> Result<Self> {
        let mut kb = KBest::empty(graph, true, NextStrategy::Integrated);
        let first = opt_constrained(graph, &ConstraintSet::new(true), true)?;
        kb.branch_on_root(&ConstraintSet::new(true), &first);
        kb.first = Some(first);
        Ok(kb)
    }

    pub fn with_strategy(graph: &'g Graph, strategy: NextStrategy) -> Result<Self> {
        let mut kb = KBest::empty(graph, false, strategy);
        let root = ConstraintSet::new(false);
        let (first, candidate) = kb.next_on(&root)?;
        kb.push_swap(candidate, root);
        kb.first = Some(first);
        Ok(kb)
    }

    fn empty(graph: &'g Graph, dep: bool, strategy: NextStrategy) -> Self {
        KBest {
            graph,
            dep,
            strategy,
            queue: BinaryHeap::new(),
            seq: 0,
            first: None,
        }
    }

    pub fn is_dependency(&self) -> bool {
        self.dep
    }

    /// Subproblems still waiting in the queue, in no particular order.
    pub fn pending(&self) -> impl Iterator<Item = &QueueItem> + '_ {
        self.queue.iter()
    }

    fn next_on(&self, c: &ConstraintSet) -> Result<(Arborescence, Option<SwapCandidate>)> {
        match self.strategy {
            NextStrategy::Integrated => next_constrained(self.graph, c),
            NextStrategy::Naive => naive_next_constrained(self.graph, c),
        }
    }

    fn push(&mut self, priority: f64, edge: EdgeId, constraints: ConstraintSet, kind: BranchKind) {
        self.queue.push(QueueItem {
            priority,
            edge,
            constraints,
            kind,
            seq: self.seq,
        });
        self.seq += 1;
    }

    fn push_swap(&mut self, candidate: Option<SwapCandidate>, constraints: ConstraintSet) {
        if let Some(c) = candidate {
            self.push(c.weight, c.edge, constraints, BranchKind::Swap);
        }
    }

    /// Queues the two ways to differ from `tree` (the best dependency tree
    /// of `c`): a different root edge, or the same root edge and some other
    /// edge.
    fn branch_on_root(&mut self, c: &ConstraintSet, tree: &Arborescence) {
        let child = tree.root_children().next().expect("dependency tree has a root child");
        let root_edge = self.graph.edge_between(ROOT, child).expect("tree edge exists").id;
        match opt_constrained(self.graph, &c.with_excluded(root_edge), true) {
            Ok(other) => self.push(other.weight(), root_edge, c.clone(), BranchKind::RootExclusion),
            Err(Error::NoTree) => {}
            Err(e) => panic!("decoding a root-exclusion branch failed: {e}"),
        }
        let fixed = c.with_included(root_edge);
        let (_, candidate) = self
            .next_on(&fixed)
            .expect("a subproblem containing a reported tree has a tree");
        self.push_swap(candidate, fixed);
    }
}

impl Iterator for KBest<'_> {
    type Item = Arborescence;

    fn next(&mut self) -> Option<Arborescence> {
        if let Some(first) = self.first.take() {
            return Some(first);
        }
        let item = self.queue.pop()?;
        match item.kind {
            BranchKind::Swap => {
                let without = item.constraints.with_excluded(item.edge);
                let (tree, candidate) = self
                    .next_on(&without)
                    .expect("a queued swap candidate names a decodable subproblem");
                self.push_swap(candidate, without);
                let with = item.constraints.with_included(item.edge);
                let (_, candidate) = self
                    .next_on(&with)
                    .expect("a subproblem containing a reported tree has a tree");
                self.push_swap(candidate, with);
                Some(tree)
            }
            BranchKind::RootExclusion => {
                let without = item.constraints.with_excluded(item.edge);
                let tree = opt_constrained(self.graph, &without, true)
                    .expect("a queued root exclusion names a decodable subproblem");
                self.branch_on_root(&without, &tree);
                Some(tree)
            }
        }
    }
}

/// The `k` best arborescences of `g`, heaviest first.
pub fn kbest(g: &Graph, k: usize) -> Result<Vec<Arborescence>> {
    Ok(KBest::new(g)?.take(k).collect())
}

/// The `k` best dependency trees of `g`, heaviest first.
pub fn kbest_dep(g: &Graph, k: usize) -> Result<Vec<Arborescence>> {
    Ok(KBest::dependency(g)?.take(k).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::{example, id};

    fn weights(trees: &[Arborescence]) -> Vec<f64> {
        trees.iter().map(Arborescence::weight).collect()
    }

    #[test]
    fn kbest_example() {
        let g = example();
        let all = kbest(&g, 50).unwrap();
        assert_eq!(weights(&all), vec![260.0, 220.0, 210.0, 200.0, 190.0, 150.0, 130.0]);
        assert_eq!(all[0].parents(), &[None, Some(0), Some(0), Some(4), Some(2)]);
        assert_eq!(weights(&kbest(&g, 3).unwrap()), vec![260.0, 220.0, 210.0]);
    }

    #[test]
    fn kbest_dep_example() {
        let g = example();
        let all = kbest_dep(&g, 10).unwrap();
        assert_eq!(weights(&all), vec![210.0, 190.0, 150.0, 130.0]);
        assert_eq!(all[0].parents(), &[None, Some(0), Some(3), Some(1), Some(2)]);
        assert!(all.iter().all(Arborescence::is_dependency_tree));
    }

    #[test]
    fn kbest_dep_first_pop_is_root_exclusion() {
        let g = example();
        let mut it = KBest::dependency(&g).unwrap();
        let items: Vec<_> = it.pending().cloned().collect();
        assert_eq!(items.len(), 1, "the inclusion branch for 0 -> 1 has no second tree");
        assert_eq!(items[0].kind, BranchKind::RootExclusion);
        assert_eq!(items[0].edge, id(&g, 0, 1));
        assert_eq!(items[0].priority, 190.0);
        it.next();
        assert_eq!(it.next().unwrap().weight(), 190.0);
        // the 150 tree comes from swapping out 4 -> 3 under root edge 0 -> 2
        let items: Vec<_> = it.pending().cloned().collect();
        assert_eq!(items.len(), 1);
        assert_eq!(items[0].kind, BranchKind::Swap);
        assert_eq!(items[0].edge, id(&g, 4, 3));
        assert_eq!(items[0].priority, 150.0);
        assert!(items[0].constraints.included.contains(&id(&g, 0, 2)));
    }

    #[test]
    fn unique_tree() {
        let g = Graph::new(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(kbest(&g, 5).unwrap().len(), 1);
        assert_eq!(kbest_dep(&g, 5).unwrap().len(), 1);
    }

    #[test]
    fn no_tree() {
        let g = Graph::new(2, []).unwrap();
        assert!(matches!(kbest(&g, 1), Err(Error::NoTree)));
        assert!(matches!(kbest_dep(&g, 1), Err(Error::NoTree)));
    }

    #[test]
    fn naive_strategy_matches() {
        let g = example();
        let naive: Vec<_> = KBest::with_strategy(&g, NextStrategy::Naive).unwrap().collect();
        assert_eq!(naive, kbest(&g, 100).unwrap());
    }
}
