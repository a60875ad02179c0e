#![allow(dead_code)]

use std::collections::BTreeMap;

use arborist::generate::random_graph;
use arborist::{Arborescence, Graph, NodeId};
use proptest::prelude::*;

/// Random graphs with distinct integer weights and `1..=max_n` non-root
/// nodes. Some have no tree at all.
pub fn distinct_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0.3f64..=1.0).prop_map(|(n, seed, density)| random_graph(n, density, seed))
}

/// Random graphs whose weights come from a tiny range, so that ties between
/// edges and between trees are common.
pub fn tied_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let nodes = n + 1;
        let pairs: Vec<(NodeId, NodeId)> = (0..nodes)
            .flat_map(|t| (1..nodes).filter(move |&h| h != t).map(move |h| (t, h)))
            .collect();
        proptest::collection::vec(proptest::option::weighted(0.8, 1u8..=3), pairs.len()).prop_map(move |ws| {
            let edges = pairs
                .iter()
                .zip(ws)
                .filter_map(|(&(t, h), w)| w.map(|w| (t, h, f64::from(w))));
            Graph::new(nodes, edges).unwrap()
        })
    })
}

pub fn weights(trees: &[Arborescence]) -> Vec<f64> {
    trees.iter().map(Arborescence::weight).collect()
}

/// Trees as a multiset of parent vectors.
pub fn tree_counts<'a>(trees: impl IntoIterator<Item = &'a Arborescence>) -> BTreeMap<Vec<Option<NodeId>>, usize> {
    let mut counts = BTreeMap::new();
    for t in trees {
        *counts.entry(t.parents().to_vec()).or_insert(0) += 1;
    }
    counts
}
