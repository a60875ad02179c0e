//! K-best maximum spanning arborescences of rooted weighted digraphs.
//!
//! The decoders work on dense graphs whose node `0` is the root:
//!
//! - [`opt`] finds the best arborescence, or the best *dependency tree*
//!   (exactly one edge leaving the root) when asked to.
//! - [`next`] finds the best arborescence together with the edge whose
//!   deletion yields the second-best one, in the same contraction pass.
//! - [`KBest`] enumerates arborescences (or dependency trees) in
//!   non-increasing weight order in `O(K N²)`.
//!
//! The [`oracle`] module holds brute-force references used for testing.

pub mod contraction;
pub mod enumeration;
mod error;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod second_best;

pub use contraction::{opt, opt_constrained};
pub use enumeration::{kbest, kbest_dep, BranchKind, KBest, NextStrategy, QueueItem};
pub use error::{Error, Result};
pub use graph::{
    apply_constraints, is_dependency_tree, is_valid_tree, tree_weight, Arborescence, ConstraintSet, Edge, EdgeId,
    Graph, NodeId, ROOT,
};
pub use second_best::{next, next_constrained, SwapCandidate};
