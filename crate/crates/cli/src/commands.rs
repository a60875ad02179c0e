//! The work behind each subcommand, independent of argument parsing.

use std::collections::HashSet;
use std::fmt;
use std::io::Write;
use std::time::Instant;

use arborist::oracle::enumerate_all;
use arborist::{Arborescence, Graph, KBest, NextStrategy, NodeId};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// One line of `kbest` output.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct TreeRecord {
    pub k: usize,
    pub weight: f64,
    pub parent: Vec<Option<NodeId>>,
}

impl TreeRecord {
    pub fn new(k: usize, tree: &Arborescence) -> Self {
        TreeRecord {
            k,
            weight: tree.weight(),
            parent: tree.parents().to_vec(),
        }
    }

    pub fn parse(line: &str) -> Result<Self, CliError> {
        serde_json::from_str(line).map_err(|e| CliError::Parse(format!("tree record {line:?}: {e}")))
    }
}

impl fmt::Display for TreeRecord {
    // f64's Display is the shortest string that reads back to the same
    // value, and prints integral weights without a fractional part
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{\"k\":{},\"weight\":{},\"parent\":[", self.k, self.weight)?;
        for (i, p) in self.parent.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match p {
                Some(p) => write!(f, "{p}")?,
                None => f.write_str("null")?,
            }
        }
        f.write_str("]}")
    }
}

fn stream(g: &Graph, dep: bool) -> Result<KBest<'_>, CliError> {
    Ok(if dep { KBest::dependency(g)? } else { KBest::new(g)? })
}

/// Writes up to `k` trees as JSON lines and returns how many were written.
pub fn write_kbest(g: &Graph, k: usize, dep: bool, out: &mut dyn Write) -> Result<usize, CliError> {
    let mut written = 0;
    for (idx, tree) in stream(g, dep)?.take(k).enumerate() {
        writeln!(out, "{}", TreeRecord::new(idx + 1, &tree))?;
        written += 1;
    }
    log::debug!("wrote {written} of at most {k} trees");
    Ok(written)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Divergence {
    /// 1-based position of the first disagreement.
    pub k: usize,
    pub reason: String,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "first divergence at k={}: {}", self.k, self.reason)
    }
}

/// Compares a decoded stream with the reference enumeration: weights must
/// agree position by position and the trees must agree as sets.
pub fn compare_streams(expected: &[TreeRecord], actual: &[TreeRecord]) -> Option<Divergence> {
    let reference: HashSet<&[Option<NodeId>]> = expected.iter().map(|r| r.parent.as_slice()).collect();
    let mut seen = HashSet::new();
    for idx in 0..expected.len().max(actual.len()) {
        let k = idx + 1;
        let reason = match (expected.get(idx), actual.get(idx)) {
            (Some(e), None) => format!("stream ended, expected a tree of weight {}", e.weight),
            (None, Some(a)) => format!("unexpected extra tree of weight {}", a.weight),
            (Some(e), Some(a)) if e.weight != a.weight => {
                format!("expected weight {}, found {}", e.weight, a.weight)
            }
            (_, Some(a)) if !reference.contains(a.parent.as_slice()) => {
                format!("tree {:?} is not in the reference enumeration", a.parent)
            }
            (_, Some(a)) if !seen.insert(a.parent.as_slice()) => format!("tree {:?} repeats", a.parent),
            _ => continue,
        };
        return Some(Divergence { k, reason });
    }
    None
}

pub fn records(trees: &[Arborescence]) -> Vec<TreeRecord> {
    trees
        .iter()
        .enumerate()
        .map(|(i, t)| TreeRecord::new(i + 1, t))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub dep: bool,
    pub trees: usize,
    pub divergence: Option<Divergence>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.dep { "dependency trees" } else { "trees" };
        match &self.divergence {
            None => write!(f, "PASS: {} {kind} match exhaustive enumeration", self.trees),
            Some(d) => write!(f, "FAIL: {d} (reference has {} {kind})", self.trees),
        }
    }
}

/// Checks `candidate` (or, when absent, the full decoded stream of `g`)
/// against exhaustive enumeration.
pub fn check(g: &Graph, dep: bool, candidate: Option<Vec<TreeRecord>>) -> Result<CheckReport, CliError> {
    let reference = records(&enumerate_all(g, dep)?);
    let actual = match candidate {
        Some(c) => c,
        None if reference.is_empty() => Vec::new(),
        None => {
            let trees: Vec<_> = stream(g, dep)?.collect();
            records(&trees)
        }
    };
    log::debug!("reference {} trees, candidate {}", reference.len(), actual.len());
    Ok(CheckReport {
        dep,
        trees: reference.len(),
        divergence: compare_streams(&reference, &actual),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsReport {
    pub k: usize,
    pub dep: bool,
    pub trees: usize,
    /// Trees with more than one root child.
    pub violations: usize,
    pub rate: f64,
}

/// Root-constraint violations among the first `k` decoded trees.
pub fn stats(g: &Graph, k: usize, dep: bool) -> Result<StatsReport, CliError> {
    let mut trees = 0;
    let mut violations = 0;
    for t in stream(g, dep)?.take(k) {
        trees += 1;
        if t.root_children().count() > 1 {
            violations += 1;
        }
    }
    Ok(StatsReport {
        k,
        dep,
        trees,
        violations,
        rate: violations as f64 / trees as f64,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub nodes: usize,
    pub edges: usize,
    pub k: usize,
    pub trees: usize,
    pub integrated_ms: f64,
    pub naive_ms: f64,
    /// `naive_ms / integrated_ms`.
    pub speedup: f64,
    pub identical: bool,
}

/// Times K-best with the integrated second-best step against the variant
/// that re-decodes once per tree edge.
pub fn bench(g: &Graph, k: usize) -> Result<BenchReport, CliError> {
    let run = |strategy| -> Result<(Vec<f64>, f64), CliError> {
        let start = Instant::now();
        let weights: Vec<f64> = KBest::with_strategy(g, strategy)?.take(k).map(|t| t.weight()).collect();
        Ok((weights, start.elapsed().as_secs_f64() * 1e3))
    };
    let (integrated, integrated_ms) = run(NextStrategy::Integrated)?;
    let (naive, naive_ms) = run(NextStrategy::Naive)?;
    log::debug!("integrated {integrated_ms:.3} ms, naive {naive_ms:.3} ms");
    Ok(BenchReport {
        nodes: g.node_count() - 1,
        edges: g.edge_count(),
        k,
        trees: integrated.len(),
        integrated_ms,
        naive_ms,
        speedup: naive_ms / integrated_ms,
        identical: integrated == naive,
    })
}
