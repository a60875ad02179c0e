//! Structural invariants of contraction, constraints and enumeration.

mod common;

use std::collections::BTreeMap;

use arborist::contraction::{find_critical_cycle, opt_traced, DenseGraph, LevelTree};
use arborist::oracle::enumerate_all;
use arborist::second_best::next_traced;
use arborist::{
    apply_constraints, is_valid_tree, kbest, kbest_dep, next_constrained, opt, opt_constrained, tree_weight,
    Arborescence, BranchKind, ConstraintSet, Graph, KBest, NodeId, ROOT,
};
use common::{tied_graph, tree_counts};
use proptest::prelude::*;
use proptest::sample::Index;

/// Attaches active nodes of `dg` one at a time, each through a randomly
/// chosen arc from the already attached part. `None` if some node cannot
/// be reached.
fn random_level_tree(dg: &DenseGraph, picks: &[Index]) -> Option<LevelTree> {
    let mut parent = vec![None; dg.node_bound()];
    let mut attached = vec![false; dg.node_bound()];
    attached[ROOT] = true;
    let mut pending: Vec<NodeId> = dg.active_nodes().collect();
    let mut pick = picks.iter().cycle();
    while !pending.is_empty() {
        let options: Vec<(usize, _)> = pending
            .iter()
            .enumerate()
            .flat_map(|(k, &v)| {
                (0..dg.node_bound())
                    .filter(|&u| attached[u])
                    .flat_map(move |u| dg.parallel_arcs(u, v).into_iter().map(move |a| (k, a)))
            })
            .collect();
        if options.is_empty() {
            return None;
        }
        let (k, arc) = options[pick.next().unwrap().index(options.len())];
        let v = pending.swap_remove(k);
        parent[v] = Some(arc);
        attached[v] = true;
    }
    Some(LevelTree::from_arcs(parent))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn stitching_preserves_weight(g in tied_graph(6), picks in proptest::collection::vec(any::<Index>(), 1..16)) {
        let mut dg = DenseGraph::new(&g);
        let mut records = Vec::new();
        while let Ok(greedy) = dg.greedy() {
            let Some(cycle) = find_critical_cycle(&greedy) else { break };
            let rec = dg.contract(&cycle).unwrap();
            let members: Vec<f64> = rec.cycle_arcs.iter().map(|a| a.weight).collect();
            let total: f64 = members.iter().sum();
            for (k, &m) in rec.cycle.iter().enumerate() {
                prop_assert_eq!(rec.entry_weight(m).unwrap() + members[k], total);
            }
            records.push(rec);
        }
        let Some(mut tree) = random_level_tree(&dg, &picks) else { return Ok(()) };
        let weight = tree.weight();
        for rec in records.iter().rev() {
            dg.stitch(&mut tree, rec).unwrap();
            prop_assert_eq!(tree.weight(), weight);
        }
        let t = tree.to_arborescence(&g);
        prop_assert!(is_valid_tree(&g, t.parents()));
        prop_assert_eq!(tree_weight(&g, t.parents()).unwrap(), weight);
    }

    #[test]
    fn next_contracts_exactly_like_opt(g in tied_graph(7)) {
        let c = ConstraintSet::default();
        if let Ok((_, _, trace)) = next_traced(&g, &c) {
            let (_, opt_trace) = opt_traced(&g, &c, false).unwrap();
            prop_assert_eq!(trace, opt_trace);
        }
    }

    #[test]
    fn opt_is_greedy_when_greedy_is_a_tree(g in tied_graph(6)) {
        let Ok(greedy) = DenseGraph::new(&g).greedy() else { return Ok(()) };
        if find_critical_cycle(&greedy).is_none() {
            let t = opt(&g, false).unwrap();
            prop_assert_eq!(t.weight(), greedy.weight());
            for v in 1..g.node_count() {
                prop_assert_eq!(t.parent(v), greedy.parent(v));
            }
        }
    }
}

/// A consistent constraint set drawn from the edges of `g`: included edges
/// come from a random tree, excluded ones from the rest.
fn constraint_set(g: &Graph, dep_mode: bool, bits: &[bool]) -> ConstraintSet {
    let mut c = ConstraintSet::new(dep_mode);
    let Ok(t) = opt(g, false) else { return c };
    let tree_edges = t.edge_ids(g);
    let mut bit = bits.iter().cycle();
    let mut root_included = false;
    for e in g.edges() {
        let take = *bit.next().unwrap() && *bit.next().unwrap();
        if !take {
            continue;
        }
        if tree_edges.contains(&e.id) {
            if e.tail == ROOT && dep_mode && std::mem::replace(&mut root_included, true) {
                continue;
            }
            c = c.with_included(e.id);
        } else {
            c = c.with_excluded(e.id);
        }
    }
    c
}

fn respects(g: &Graph, c: &ConstraintSet, t: &Arborescence) -> bool {
    let edges = t.edge_ids(g);
    let root_edge = c.included.iter().find(|&&e| g.edge(e).unwrap().tail == ROOT);
    c.included.iter().all(|e| edges.contains(e))
        && !c.excluded.iter().any(|e| edges.contains(e))
        && (!c.dep_mode || root_edge.is_none() || t.root_children().count() == 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn constraints_are_idempotent_and_respected(
        g in tied_graph(5),
        dep_mode in any::<bool>(),
        bits in proptest::collection::vec(any::<bool>(), 8..40),
    ) {
        let c = constraint_set(&g, dep_mode, &bits);
        prop_assert!(c.is_consistent(&g));
        let h = apply_constraints(&g, &c);
        prop_assert_eq!(&apply_constraints(&h, &c), &h);
        for e in h.edges() {
            prop_assert_eq!(g.edge(e.id), Some(e));
        }

        let expected: Vec<_> = enumerate_all(&g, false)
            .unwrap()
            .into_iter()
            .filter(|t| respects(&g, &c, t))
            .collect();
        let actual = enumerate_all(&h, false).unwrap();
        prop_assert_eq!(tree_counts(&actual), tree_counts(&expected));
        match opt_constrained(&g, &c, false) {
            Ok(t) => {
                prop_assert!(respects(&g, &c, &t));
                prop_assert_eq!(t.weight(), expected[0].weight());
            }
            Err(_) => prop_assert!(expected.is_empty()),
        }
    }

    #[test]
    fn disjoint_constraints_commute(
        g in tied_graph(5),
        a in proptest::collection::vec(any::<bool>(), 8..40),
        b in proptest::collection::vec(any::<bool>(), 8..40),
    ) {
        let c1 = constraint_set(&g, false, &a);
        let mut c2 = constraint_set(&g, false, &b);
        c2.included.retain(|e| !c1.included.contains(e) && !c1.excluded.contains(e));
        c2.excluded.retain(|e| !c1.included.contains(e) && !c1.excluded.contains(e));
        let one = apply_constraints(&apply_constraints(&g, &c1), &c2);
        let two = apply_constraints(&apply_constraints(&g, &c2), &c1);
        prop_assert_eq!(one, two);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn streams_are_valid_distinct_and_sorted(g in tied_graph(6), k in 1usize..300) {
        for dep in [false, true] {
            let Ok(trees) = (if dep { kbest_dep(&g, k) } else { kbest(&g, k) }) else { continue };
            prop_assert!(trees.len() <= k);
            for t in &trees {
                prop_assert!(is_valid_tree(&g, t.parents()));
                prop_assert_eq!(tree_weight(&g, t.parents()).unwrap(), t.weight());
                prop_assert!(!dep || t.is_dependency_tree());
            }
            prop_assert!(tree_counts(&trees).values().all(|&n| n == 1));
            prop_assert!(trees.windows(2).all(|w| w[0].weight() >= w[1].weight()));
        }
    }

    #[test]
    fn streams_are_prefix_stable_and_deterministic(g in tied_graph(6), k1 in 1usize..60, extra in 0usize..60) {
        let k2 = k1 + extra;
        if let (Ok(short), Ok(long)) = (kbest(&g, k1), kbest(&g, k2)) {
            prop_assert_eq!(&long[..short.len()], &short[..]);
            prop_assert_eq!(kbest(&g, k2).unwrap(), long);
        }
        if let (Ok(short), Ok(long)) = (kbest_dep(&g, k1), kbest_dep(&g, k2)) {
            prop_assert_eq!(&long[..short.len()], &short[..]);
            prop_assert_eq!(kbest_dep(&g, k2).unwrap(), long);
        }
    }

    #[test]
    fn queue_partitions_the_unreported_trees(g in tied_graph(4), dep in any::<bool>()) {
        let it = if dep { KBest::dependency(&g) } else { KBest::new(&g) };
        let Ok(mut it) = it else { return Ok(()) };
        let mut unreported = tree_counts(&enumerate_all(&g, dep).unwrap());
        loop {
            let Some(t) = it.next() else {
                prop_assert!(unreported.is_empty());
                break;
            };
            prop_assert_eq!(unreported.remove(t.parents()), Some(1));
            let mut covered: BTreeMap<Vec<Option<NodeId>>, usize> = BTreeMap::new();
            for item in it.pending() {
                let trees = match item.kind {
                    BranchKind::Swap => {
                        let (reported, _) = next_constrained(&g, &item.constraints).unwrap();
                        let mut all = enumerate_all(&apply_constraints(&g, &item.constraints), false).unwrap();
                        all.retain(|t| *t != reported);
                        all
                    }
                    BranchKind::RootExclusion => {
                        let c = item.constraints.with_excluded(item.edge);
                        enumerate_all(&apply_constraints(&g, &c), true).unwrap()
                    }
                };
                for t in &trees {
                    *covered.entry(t.parents().to_vec()).or_insert(0) += 1;
                }
            }
            prop_assert_eq!(&covered, &unreported);
        }
    }
}

#[test]
fn stream_weights_match_recomputed_weights() {
    let g = arborist::generate::dense_graph(7, 3);
    for t in kbest(&g, 500).unwrap() {
        assert_eq!(tree_weight(&g, t.parents()).unwrap(), t.weight());
    }
}
