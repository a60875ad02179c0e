//! Rooted weighted digraphs, arborescences over them, and edge constraints.
//!
//! Node `0` is always the root. Graphs are stored densely: an `N x N` index
//! from `(tail, head)` to an edge id, plus the edges themselves addressed by
//! id. Edge ids are assigned in insertion order and survive
//! [`apply_constraints`], so an id names the same edge in every subgraph.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

/// The root node of every graph.
pub const ROOT: NodeId = 0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<Option<Edge>>,
    index: Vec<Option<EdgeId>>,
    live: usize,
}

impl Graph {
    /// Builds a graph on `node_count` nodes (`0..node_count`, root `0`).
    ///
    /// Edge ids are the positions in `edges`.
    pub fn new<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        if node_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut graph = Graph {
            node_count,
            edges: Vec::new(),
            index: vec![None; node_count * node_count],
            live: 0,
        };
        for (tail, head, weight) in edges {
            for node in [tail, head] {
                if node >= node_count {
                    return Err(Error::NodeOutOfRange { node, node_count });
                }
            }
            if tail == head {
                return Err(Error::SelfLoop(tail));
            }
            if head == ROOT {
                return Err(Error::RootIncoming { tail });
            }
            if !weight.is_finite() {
                return Err(Error::NonFiniteWeight { tail, head });
            }
            let slot = &mut graph.index[tail * node_count + head];
            if slot.is_some() {
                return Err(Error::DuplicateEdge { tail, head });
            }
            let id = graph.edges.len();
            *slot = Some(id);
            graph.edges.push(Some(Edge { id, tail, head, weight }));
            graph.live += 1;
        }
        Ok(graph)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Number of edges present in this graph.
    pub fn edge_count(&self) -> usize {
        self.live
    }

    /// One past the largest edge id ever assigned, including removed edges.
    pub fn edge_id_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.get(id).and_then(Option::as_ref)
    }

    pub fn edge_between(&self, tail: NodeId, head: NodeId) -> Option<&Edge> {
        if tail >= self.node_count || head >= self.node_count {
            return None;
        }
        self.index[tail * self.node_count + head].and_then(|id| self.edge(id))
    }

    pub fn weight(&self, tail: NodeId, head: NodeId) -> Option<f64> {
        self.edge_between(tail, head).map(|e| e.weight)
    }

    /// Edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().flatten()
    }

    /// Edges entering `head`, ordered by tail.
    pub fn incoming(&self, head: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        (0..self.node_count).filter_map(move |tail| self.edge_between(tail, head))
    }

    /// Edges leaving `tail`, ordered by head.
    pub fn outgoing(&self, tail: NodeId) -> impl Iterator<Item = &Edge> + '_ {
        (0..self.node_count).filter_map(move |head| self.edge_between(tail, head))
    }

    fn remove(&mut self, id: EdgeId) {
        if let Some(edge) = self.edges[id].take() {
            self.index[edge.tail * self.node_count + edge.head] = None;
            self.live -= 1;
        }
    }
}

/// Edges a subproblem must contain or avoid.
///
/// In `dep_mode`, including a root edge also forbids every other root edge,
/// so that the trees of the constrained graph are exactly the dependency
/// trees containing it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstraintSet {
    pub included: BTreeSet<EdgeId>,
    pub excluded: BTreeSet<EdgeId>,
    pub dep_mode: bool,
}

impl ConstraintSet {
    pub fn new(dep_mode: bool) -> Self {
        ConstraintSet {
            dep_mode,
            ..Default::default()
        }
    }

    pub fn with_included(&self, edge: EdgeId) -> Self {
        let mut next = self.clone();
        next.excluded.remove(&edge);
        next.included.insert(edge);
        next
    }

    pub fn with_excluded(&self, edge: EdgeId) -> Self {
        let mut next = self.clone();
        next.included.remove(&edge);
        next.excluded.insert(edge);
        next
    }

    pub fn is_empty(&self) -> bool {
        self.included.is_empty() && self.excluded.is_empty()
    }

    /// Checks the set's invariants against the edges of `g`: disjoint
    /// include/exclude sets, at most one included edge per head and, in
    /// dep mode, at most one included root edge.
    pub fn is_consistent(&self, g: &Graph) -> bool {
        if !self.included.is_disjoint(&self.excluded) {
            return false;
        }
        let mut heads = BTreeSet::new();
        let mut root_edges = 0;
        for &id in &self.included {
            let Some(edge) = g.edge(id) else {
                return false;
            };
            if !heads.insert(edge.head) {
                return false;
            }
            if edge.tail == ROOT {
                root_edges += 1;
            }
        }
        !(self.dep_mode && root_edges > 1)
    }

    /// Whether `g` keeps the edge `e` after these constraints are applied.
    pub(crate) fn keeps(&self, g: &Graph, e: &Edge, forced: &[Option<EdgeId>], root_forced: Option<EdgeId>) -> bool {
        if self.excluded.contains(&e.id) {
            return false;
        }
        if let Some(id) = forced[e.head] {
            if id != e.id {
                return false;
            }
        }
        if e.tail == ROOT {
            if let Some(id) = root_forced {
                if id != e.id {
                    return false;
                }
            }
        }
        debug_assert!(g.edge(e.id).is_some());
        true
    }

    /// Per-head included edge and, in dep mode, the included root edge.
    pub(crate) fn forced(&self, g: &Graph) -> (Vec<Option<EdgeId>>, Option<EdgeId>) {
        let mut forced = vec![None; g.node_count()];
        let mut root_forced = None;
        for &id in &self.included {
            if let Some(edge) = g.edge(id) {
                forced[edge.head] = Some(id);
                if self.dep_mode && edge.tail == ROOT {
                    root_forced = Some(id);
                }
            }
        }
        (forced, root_forced)
    }
}

/// Restricts `g` to the edges allowed by `c`. Surviving edges keep their ids.
///
/// Constraint ids that name no edge of `g` are ignored.
pub fn apply_constraints(g: &Graph, c: &ConstraintSet) -> Graph {
    let (forced, root_forced) = c.forced(g);
    let mut out = g.clone();
    for edge in g.edges() {
        if !c.keeps(g, edge, &forced, root_forced) {
            out.remove(edge.id);
        }
    }
    out
}

/// A spanning arborescence rooted at node `0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Arborescence {
    parent: Vec<Option<NodeId>>,
    weight: f64,
}

impl Arborescence {
    /// Validates `parent` against `g` and computes the weight.
    pub fn from_parents(g: &Graph, parent: Vec<Option<NodeId>>) -> Result<Self> {
        if !is_valid_tree(g, &parent) {
            return Err(Error::NoTree);
        }
        let weight = tree_weight(g, &parent)?;
        Ok(Arborescence { parent, weight })
    }

    /// Skips validation; callers guarantee `parent` is a tree of `g`.
    pub(crate) fn from_parents_unchecked(g: &Graph, parent: Vec<Option<NodeId>>) -> Self {
        debug_assert!(is_valid_tree(g, &parent));
        let weight = tree_weight(g, &parent).expect("tree edges exist in the graph");
        Arborescence { parent, weight }
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.parent.get(node).copied().flatten()
    }

    /// Parent of every node; entry `0` is `None`.
    pub fn parents(&self) -> &[Option<NodeId>] {
        &self.parent
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root_children(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter(|(_, p)| **p == Some(ROOT))
            .map(|(node, _)| node)
    }

    pub fn is_dependency_tree(&self) -> bool {
        self.node_count() == 1 || self.root_children().count() == 1
    }

    /// Ids of the tree's edges in `g`, ordered by head.
    pub fn edge_ids(&self, g: &Graph) -> Vec<EdgeId> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(head, p)| p.and_then(|tail| g.edge_between(tail, head)).map(|e| e.id))
            .collect()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.parent(e.head) == Some(e.tail)
    }
}

/// True iff `parent` gives every non-root node a parent along an edge of
/// `g` and the resulting graph has no cycle.
pub fn is_valid_tree(g: &Graph, parent: &[Option<NodeId>]) -> bool {
    let n = g.node_count();
    if parent.len() != n || parent[ROOT].is_some() {
        return false;
    }
    for (head, p) in parent.iter().enumerate().skip(1) {
        match p {
            Some(tail) if g.edge_between(*tail, head).is_some() => {}
            _ => return false,
        }
    }
    // 0 = unvisited, 1 = on the current walk, 2 = reaches the root
    let mut state = vec![0u8; n];
    state[ROOT] = 2;
    let mut walk = Vec::new();
    for start in 1..n {
        let mut node = start;
        while state[node] == 0 {
            state[node] = 1;
            walk.push(node);
            node = parent[node].expect("checked above");
        }
        if state[node] == 1 {
            return false;
        }
        for v in walk.drain(..) {
            state[v] = 2;
        }
    }
    true
}

/// [`is_valid_tree`] plus exactly one edge leaving the root.
pub fn is_dependency_tree(g: &Graph, parent: &[Option<NodeId>]) -> bool {
    is_valid_tree(g, parent) && (g.node_count() == 1 || parent.iter().filter(|p| **p == Some(ROOT)).count() == 1)
}

/// Sum of the weights of the edges named by `parent`, in head order.
pub fn tree_weight(g: &Graph, parent: &[Option<NodeId>]) -> Result<f64> {
    let mut total = 0.0;
    for (head, p) in parent.iter().enumerate() {
        if let Some(tail) = *p {
            total += g.weight(tail, head).ok_or(Error::MissingEdge { tail, head })?;
        }
    }
    Ok(total)
}
