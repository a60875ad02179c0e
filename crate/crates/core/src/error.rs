use thiserror::Error;

use crate::graph::{EdgeId, NodeId};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("graph must contain at least the root node")]
    EmptyGraph,

    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: NodeId, node_count: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("duplicate edge {tail} -> {head}")]
    DuplicateEdge { tail: NodeId, head: NodeId },

    #[error("edge {tail} -> {head} has a non-finite weight")]
    NonFiniteWeight { tail: NodeId, head: NodeId },

    #[error("edge {tail} -> 0 enters the root")]
    RootIncoming { tail: NodeId },

    #[error("no edge {tail} -> {head} in the graph")]
    MissingEdge { tail: NodeId, head: NodeId },

    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),

    #[error("node {0} has no incoming edge")]
    NoIncomingEdge(NodeId),

    #[error("graph admits no arborescence")]
    NoTree,

    #[error("node list is not a cycle of the greedy graph")]
    NotACycle,

    #[error("tree has no edge entering contracted node {0}")]
    MissingEntryEdge(NodeId),

    #[error("graph with {nodes} non-root nodes is too large for exhaustive enumeration (limit {limit})")]
    TooLarge { nodes: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
