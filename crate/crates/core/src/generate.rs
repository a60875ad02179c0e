//! Seeded random graphs for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, NodeId, ROOT};

/// Complete graph on `n` non-root nodes (every edge except self-loops and
/// edges into the root) with distinct integer weights `1..=n²`.
pub fn dense_graph(n: usize, seed: u64) -> Graph {
    random_graph(n, 1.0, seed)
}

/// Like [`dense_graph`] but each edge is kept with probability `density`.
/// Weights stay distinct integers.
pub fn random_graph(n: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = n + 1;
    let mut pairs: Vec<(NodeId, NodeId)> = (0..nodes)
        .flat_map(|tail| {
            (1..nodes)
                .filter(move |&head| head != tail)
                .map(move |head| (tail, head))
        })
        .collect();
    if density < 1.0 {
        pairs.retain(|_| rng.gen_bool(density.clamp(0.0, 1.0)));
    }
    let mut weights: Vec<u32> = (1..=pairs.len() as u32).collect();
    weights.shuffle(&mut rng);
    Graph::new(
        nodes,
        pairs
            .into_iter()
            .zip(weights)
            .map(|((tail, head), w)| (tail, head, f64::from(w))),
    )
    .expect("generated edges are valid")
}

/// Whether every non-root node has an incoming edge from the root side,
/// i.e. whether [`random_graph`] produced something with at least one tree.
pub fn spans_from_root(g: &Graph) -> bool {
    let n = g.node_count();
    let mut seen = vec![false; n];
    seen[ROOT] = true;
    let mut stack = vec![ROOT];
    while let Some(u) = stack.pop() {
        for e in g.outgoing(u) {
            if !seen[e.head] {
                seen[e.head] = true;
                stack.push(e.head);
            }
        }
    }
    seen.into_iter().all(|s| s)
}
