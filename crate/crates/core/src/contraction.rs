//! One-best decoding: greedy graphs, critical-cycle contraction, stitching,
//! and the root-constrained variant.
//!
//! Contraction happens in place on a [`DenseGraph`]. Each contraction
//! allocates a fresh mega-node id above the input's node ids, fills in the
//! mega-node's row and column from the rows and columns of the cycle's
//! members, and deactivates the members. Member rows and columns are left
//! untouched, so stitching only has to flip the active flags back and look up
//! the member-level arcs again.
//!
//! Every arc carries the id of the input edge it stands for. Between any pair
//! of nodes the two best arcs are kept: the best one is all that greedy
//! selection needs, the runner-up is what a swap needs when the best one is
//! the tree edge being replaced.

use crate::error::{Error, Result};
use crate::graph::{Arborescence, ConstraintSet, EdgeId, Graph, NodeId, ROOT};

/// An edge of a (possibly contracted) graph.
///
/// `tail` is relative to the graph the arc lives in; `edge` is always the id
/// of the input edge it was derived from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub tail: NodeId,
    pub weight: f64,
    pub edge: EdgeId,
}

impl Arc {
    /// Heavier first; equal weights go to the smaller edge id.
    pub fn outranks(&self, other: &Arc) -> bool {
        self.weight > other.weight || (self.weight == other.weight && self.edge < other.edge)
    }
}

fn pick(best: &mut Option<Arc>, arc: Arc) {
    if best.is_none_or(|b| arc.outranks(&b)) {
        *best = Some(arc);
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Slot {
    best: Option<Arc>,
    second: Option<Arc>,
}

impl Slot {
    fn offer(&mut self, arc: Arc) {
        match self.best {
            Some(best) if !arc.outranks(&best) => pick(&mut self.second, arc),
            _ => {
                self.second = self.best;
                self.best = Some(arc);
            }
        }
    }

    fn arcs(&self) -> impl Iterator<Item = Arc> {
        self.best.into_iter().chain(self.second)
    }

    fn find(&self, edge: EdgeId) -> Option<Arc> {
        self.arcs().find(|a| a.edge == edge)
    }

    fn best_excluding(&self, edge: EdgeId) -> Option<Arc> {
        self.arcs().find(|a| a.edge != edge)
    }
}

/// Working graph for decoding: a dense matrix of arcs that supports
/// contraction and stitching in place.
#[derive(Clone, Debug)]
pub struct DenseGraph {
    capacity: usize,
    slots: Vec<Slot>,
    active: Vec<bool>,
    next_node: usize,
}

impl DenseGraph {
    pub fn new(g: &Graph) -> Self {
        Self::with_constraints(g, &ConstraintSet::default())
    }

    /// The dense form of `apply_constraints(g, c)`.
    pub fn with_constraints(g: &Graph, c: &ConstraintSet) -> Self {
        let n = g.node_count();
        // at most n - 1 contractions, each adding one node
        let capacity = (2 * n).saturating_sub(1).max(1);
        let mut dg = DenseGraph {
            capacity,
            slots: vec![Slot::default(); capacity * capacity],
            active: vec![false; capacity],
            next_node: n,
        };
        dg.active[..n].iter_mut().for_each(|a| *a = true);
        let (forced, root_forced) = c.forced(g);
        for e in g.edges() {
            if c.keeps(g, e, &forced, root_forced) {
                dg.slots[e.tail * capacity + e.head].offer(Arc {
                    tail: e.tail,
                    weight: e.weight,
                    edge: e.id,
                });
            }
        }
        dg
    }

    /// One past the largest node id allocated so far.
    pub fn node_bound(&self) -> usize {
        self.next_node
    }

    pub fn is_active(&self, node: NodeId) -> bool {
        self.active.get(node).copied().unwrap_or(false)
    }

    /// Active nodes other than the root, in id order.
    pub fn active_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (1..self.next_node).filter(move |&v| self.active[v])
    }

    fn slot(&self, tail: NodeId, head: NodeId) -> &Slot {
        &self.slots[tail * self.capacity + head]
    }

    fn slot_mut(&mut self, tail: NodeId, head: NodeId) -> &mut Slot {
        &mut self.slots[tail * self.capacity + head]
    }

    /// Best arc `tail -> head`, if both nodes are active.
    pub fn arc(&self, tail: NodeId, head: NodeId) -> Option<Arc> {
        if self.is_active(tail) && self.is_active(head) {
            self.slot(tail, head).best
        } else {
            None
        }
    }

    /// The (up to two) best parallel arcs `tail -> head`.
    pub fn parallel_arcs(&self, tail: NodeId, head: NodeId) -> Vec<Arc> {
        if self.is_active(tail) && self.is_active(head) {
            self.slot(tail, head).arcs().collect()
        } else {
            Vec::new()
        }
    }

    /// Best active arc into `head` whose tail is not `skip_tail`.
    pub(crate) fn best_incoming_except(&self, head: NodeId, skip_tail: Option<NodeId>) -> Option<Arc> {
        let mut best = None;
        for tail in 0..self.next_node {
            if tail != head && self.active[tail] && Some(tail) != skip_tail {
                if let Some(arc) = self.slot(tail, head).best {
                    pick(&mut best, arc);
                }
            }
        }
        best
    }

    pub fn best_incoming(&self, head: NodeId) -> Option<Arc> {
        self.best_incoming_except(head, None)
    }

    /// Best arc into `head` from a tail accepted by `allow`, skipping the
    /// arc that stands for input edge `skip`.
    pub(crate) fn best_alternative(
        &self,
        head: NodeId,
        skip: EdgeId,
        mut allow: impl FnMut(NodeId) -> bool,
    ) -> Option<Arc> {
        let mut best = None;
        for tail in 0..self.next_node {
            if tail != head && self.active[tail] && allow(tail) {
                if let Some(arc) = self.slot(tail, head).best_excluding(skip) {
                    pick(&mut best, arc);
                }
            }
        }
        best
    }

    /// Drops every parallel arc `tail -> head`.
    pub fn remove_arcs(&mut self, tail: NodeId, head: NodeId) {
        *self.slot_mut(tail, head) = Slot::default();
    }

    /// Highest-weight incoming arc of every active non-root node.
    pub fn greedy(&self) -> Result<GreedyAssignment> {
        let mut choice = vec![None; self.next_node];
        let mut weight = 0.0;
        for v in self.active_nodes() {
            let arc = self.best_incoming(v).ok_or(Error::NoIncomingEdge(v))?;
            weight += arc.weight;
            choice[v] = Some(arc);
        }
        Ok(GreedyAssignment { choice, weight })
    }

    /// Contracts `cycle`, which must be a cycle of the greedy graph listed in
    /// edge direction.
    pub fn contract(&mut self, cycle: &[NodeId]) -> Result<CycleRecord> {
        if cycle.len() < 2 {
            return Err(Error::NotACycle);
        }
        let mut seen = vec![false; self.next_node];
        let mut arcs = Vec::with_capacity(cycle.len());
        for (k, &v) in cycle.iter().enumerate() {
            if v == ROOT || !self.is_active(v) || std::mem::replace(&mut seen[v], true) {
                return Err(Error::NotACycle);
            }
            let pred = cycle[(k + cycle.len() - 1) % cycle.len()];
            match self.best_incoming(v) {
                Some(arc) if arc.tail == pred => arcs.push(arc),
                _ => return Err(Error::NotACycle),
            }
        }
        Ok(self.contract_with(cycle, arcs))
    }

    fn contract_with(&mut self, cycle: &[NodeId], cycle_arcs: Vec<Arc>) -> CycleRecord {
        let total: f64 = cycle_arcs.iter().map(|a| a.weight).sum();
        let entry_weights: Vec<f64> = cycle_arcs.iter().map(|a| total - a.weight).collect();
        let mega = self.next_node;
        assert!(mega < self.capacity, "more contractions than nodes");
        self.next_node += 1;

        for &v in cycle {
            self.active[v] = false;
        }
        for u in 0..mega {
            if !self.active[u] {
                continue;
            }
            let mut incoming = Slot::default();
            let mut outgoing = Slot::default();
            for (k, &m) in cycle.iter().enumerate() {
                for arc in self.slot(u, m).arcs() {
                    incoming.offer(Arc {
                        tail: u,
                        weight: arc.weight + entry_weights[k],
                        edge: arc.edge,
                    });
                }
                if u != ROOT {
                    for arc in self.slot(m, u).arcs() {
                        outgoing.offer(Arc { tail: mega, ..arc });
                    }
                }
            }
            *self.slot_mut(u, mega) = incoming;
            *self.slot_mut(mega, u) = outgoing;
        }
        self.active[mega] = true;

        CycleRecord {
            cycle: cycle.to_vec(),
            mega_node: mega,
            cycle_arcs,
            entry_weights,
        }
    }

    /// Expands `rec.mega_node` in `tree`, undoing the most recent contraction
    /// still in effect. The cycle is broken at the member entered by the
    /// tree's arc into the mega-node.
    pub fn stitch(&mut self, tree: &mut LevelTree, rec: &CycleRecord) -> Result<()> {
        let mega = rec.mega_node;
        assert!(
            mega + 1 == self.next_node || !self.is_active(mega + 1),
            "stitch must undo the latest contraction first"
        );
        let entry = tree
            .parent
            .get(mega)
            .copied()
            .flatten()
            .ok_or(Error::MissingEntryEdge(mega))?;
        let (entry_idx, entry_arc) = rec
            .cycle
            .iter()
            .enumerate()
            .find_map(|(k, &m)| self.slot(entry.tail, m).find(entry.edge).map(|a| (k, a)))
            .ok_or(Error::MissingEntryEdge(mega))?;

        if tree.parent.len() < self.capacity {
            tree.parent.resize(self.capacity, None);
        }
        tree.parent[mega] = None;
        for (k, &m) in rec.cycle.iter().enumerate() {
            tree.parent[m] = Some(if k == entry_idx { entry_arc } else { rec.cycle_arcs[k] });
        }
        for x in 1..self.next_node {
            if x == mega || !self.active[x] {
                continue;
            }
            if let Some(arc) = tree.parent[x].filter(|a| a.tail == mega) {
                let inner = rec
                    .cycle
                    .iter()
                    .find_map(|&m| self.slot(m, x).find(arc.edge))
                    .expect("arc out of a mega-node comes from one of its members");
                tree.parent[x] = Some(inner);
            }
        }

        self.active[mega] = false;
        for &m in &rec.cycle {
            self.active[m] = true;
        }
        Ok(())
    }
}

/// The greedy graph: each non-root node's best incoming arc.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyAssignment {
    choice: Vec<Option<Arc>>,
    weight: f64,
}

impl GreedyAssignment {
    pub fn arc(&self, node: NodeId) -> Option<Arc> {
        self.choice.get(node).copied().flatten()
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        self.arc(node).map(|a| a.tail)
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Builds an assignment from explicit parent arcs; entry `0` must be `None`.
    pub fn from_arcs(choice: Vec<Option<Arc>>) -> Self {
        let weight = choice.iter().flatten().map(|a| a.weight).sum();
        GreedyAssignment { choice, weight }
    }
}

/// Bookkeeping for one contraction.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleRecord {
    /// Cycle nodes in edge direction, starting from the smallest id.
    pub cycle: Vec<NodeId>,
    pub mega_node: NodeId,
    /// Greedy arc entering each cycle node, aligned with `cycle`.
    pub cycle_arcs: Vec<Arc>,
    /// Weight of the cycle's edges when it is entered at each node: the
    /// cycle's total weight minus the arc entering that node.
    pub entry_weights: Vec<f64>,
}

impl CycleRecord {
    pub fn entry_weight(&self, node: NodeId) -> Option<f64> {
        self.cycle
            .iter()
            .position(|&v| v == node)
            .map(|k| self.entry_weights[k])
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.cycle.contains(&node)
    }
}

/// A tree over the active nodes of a [`DenseGraph`], as parent arcs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LevelTree {
    parent: Vec<Option<Arc>>,
}

impl LevelTree {
    pub fn from_arcs(parent: Vec<Option<Arc>>) -> Self {
        LevelTree { parent }
    }

    pub fn arc(&self, node: NodeId) -> Option<Arc> {
        self.parent.get(node).copied().flatten()
    }

    pub fn weight(&self) -> f64 {
        self.parent.iter().flatten().map(|a| a.weight).sum()
    }

    /// Reads the tree off as an arborescence of the input graph `g`. Only
    /// meaningful once every contraction has been stitched back.
    pub fn to_arborescence(&self, g: &Graph) -> Arborescence {
        let parent = (0..g.node_count()).map(|v| self.arc(v).map(|a| a.tail)).collect();
        Arborescence::from_parents_unchecked(g, parent)
    }
}

/// Greedy selection over a plain graph.
pub fn greedy_graph(g: &Graph) -> Result<GreedyAssignment> {
    DenseGraph::new(g).greedy()
}

/// A cycle of the greedy graph, or `None` if it is a tree. Among several
/// cycles the one holding the smallest node id is returned, listed in edge
/// direction from that node.
pub fn find_critical_cycle(a: &GreedyAssignment) -> Option<Vec<NodeId>> {
    find_cycle(&a.choice)
}

fn find_cycle(parent: &[Option<Arc>]) -> Option<Vec<NodeId>> {
    const FRESH: u8 = 0;
    const ON_WALK: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![FRESH; parent.len()];
    let mut walk = Vec::new();
    let mut found: Option<Vec<NodeId>> = None;
    for start in 0..parent.len() {
        let mut v = start;
        while state[v] == FRESH {
            state[v] = ON_WALK;
            walk.push(v);
            match parent[v] {
                Some(arc) => v = arc.tail,
                None => break,
            }
        }
        if state[v] == ON_WALK && parent[v].is_some() {
            let from = walk.iter().position(|&x| x == v).expect("v is on the walk");
            // walk order follows parents, i.e. against edge direction
            let mut cycle: Vec<NodeId> = walk[from..].iter().rev().copied().collect();
            let min_at = (0..cycle.len()).min_by_key(|&k| cycle[k]).expect("non-empty");
            cycle.rotate_left(min_at);
            if found.as_ref().is_none_or(|f| cycle[0] < f[0]) {
                found = Some(cycle);
            }
        }
        for x in walk.drain(..) {
            state[x] = DONE;
        }
    }
    found
}

/// What the forward (contracting) phase of a decode leaves behind.
pub(crate) struct Reduction {
    pub tree: LevelTree,
    pub records: Vec<CycleRecord>,
}

/// Contracts greedy cycles until the greedy graph is a tree.
///
/// In `dep` mode every non-root arc outranks every root arc, as if a huge
/// constant were subtracted from each edge leaving the root. Contraction
/// never changes whether an arc leaves the root, so the result is the best
/// tree among those with the fewest root edges; if that is more than one,
/// the graph has no dependency tree.
pub(crate) fn reduce(dg: &mut DenseGraph, dep: bool) -> Result<Reduction> {
    let choose = |dg: &DenseGraph, v: NodeId| -> Result<Arc> {
        let arc = if dep {
            dg.best_incoming_except(v, Some(ROOT)).or_else(|| dg.arc(ROOT, v))
        } else {
            dg.best_incoming(v)
        };
        arc.ok_or(Error::NoTree)
    };
    let mut greedy = vec![None; dg.capacity];
    for v in dg.active_nodes().collect::<Vec<_>>() {
        greedy[v] = Some(choose(dg, v)?);
    }
    let mut records = Vec::new();
    let mut in_cycle = vec![false; dg.capacity];

    while let Some(cycle) = find_cycle(&greedy[..dg.next_node]) {
        let arcs = cycle
            .iter()
            .map(|&v| greedy[v].expect("cycle node has a parent"))
            .collect();
        let rec = dg.contract_with(&cycle, arcs);
        let mega = rec.mega_node;
        for &v in &cycle {
            greedy[v] = None;
            in_cycle[v] = true;
        }
        for (x, choice) in greedy.iter_mut().enumerate().take(mega).skip(1) {
            if let Some(arc) = choice.filter(|a| in_cycle[a.tail]) {
                let lifted = dg.slot(mega, x).best.expect("member arc was lifted");
                debug_assert_eq!(lifted.edge, arc.edge);
                *choice = Some(lifted);
            }
        }
        for &v in &cycle {
            in_cycle[v] = false;
        }
        greedy[mega] = Some(choose(dg, mega)?);
        records.push(rec);
    }
    greedy.truncate(dg.next_node);
    if dep && greedy.iter().filter(|a| a.is_some_and(|a| a.tail == ROOT)).count() > 1 {
        return Err(Error::NoTree);
    }
    Ok(Reduction {
        tree: LevelTree { parent: greedy },
        records,
    })
}

/// Contracted nodes recorded while decoding.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DecodeTrace {
    /// The cycles contracted, in order.
    pub cycles: Vec<Vec<NodeId>>,
}

impl DecodeTrace {
    pub(crate) fn from_records(records: &[CycleRecord]) -> Self {
        DecodeTrace {
            cycles: records.iter().map(|r| r.cycle.clone()).collect(),
        }
    }
}

/// Best arborescence of `g`; with `dep`, best dependency tree.
pub fn opt(g: &Graph, dep: bool) -> Result<Arborescence> {
    opt_constrained(g, &ConstraintSet::default(), dep)
}

/// [`opt`] on `apply_constraints(g, c)`, without materializing the subgraph.
pub fn opt_constrained(g: &Graph, c: &ConstraintSet, dep: bool) -> Result<Arborescence> {
    opt_traced(g, c, dep).map(|(tree, _)| tree)
}

pub fn opt_traced(g: &Graph, c: &ConstraintSet, dep: bool) -> Result<(Arborescence, DecodeTrace)> {
    let mut dg = DenseGraph::with_constraints(g, c);
    let Reduction { mut tree, records } = reduce(&mut dg, dep)?;
    for rec in records.iter().rev() {
        dg.stitch(&mut tree, rec)?;
    }
    Ok((tree.to_arborescence(g), DecodeTrace::from_records(&records)))
}

/// Best dependency tree of the graph `dg` currently represents, as a tree
/// over its active nodes. Contractions made along the way are stitched back
/// before returning.
pub fn constrain(dg: &mut DenseGraph) -> Result<LevelTree> {
    let Reduction { mut tree, records } = reduce(dg, true)?;
    for rec in records.iter().rev() {
        dg.stitch(&mut tree, rec)?;
    }
    Ok(tree)
}

/// For every root child `j` of the greedy graph of `dg` (assumed acyclic),
/// the weight of the greedy graph once every root edge into `j` is removed;
/// `None` when `j` would be left without an incoming arc.
///
/// Picking the deletion with the largest such weight is only a heuristic
/// for the best dependency tree; [`constrain`] does not rely on it.
pub fn root_deletion_weights(dg: &DenseGraph) -> Result<Vec<(NodeId, Option<f64>)>> {
    let greedy = dg.greedy()?;
    Ok(dg
        .active_nodes()
        .filter(|&v| greedy.parent(v) == Some(ROOT))
        .map(|j| {
            let current = greedy.arc(j).expect("root child has an arc");
            let alt = dg.best_incoming_except(j, Some(ROOT));
            (j, alt.map(|a| greedy.weight() - current.weight + a.weight))
        })
        .collect())
}
