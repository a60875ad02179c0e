//! Reading and writing weighted edge lists.
//!
//! JSON files look like `{"num_nodes": 5, "edges": [{"u": 0, "v": 1, "w": 90}]}`.
//! TSV files hold one `u<TAB>v<TAB>w` line per edge; the node count is the
//! largest id plus one unless a `# nodes: N` line says otherwise. Other
//! lines starting with `#` and blank lines are skipped.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use arborist::Graph;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

impl Format {
    /// `.tsv` and `.txt` files are TSV, anything else JSON.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("tsv" | "txt") => Format::Tsv,
            _ => Format::Json,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGraph {
    num_nodes: usize,
    edges: Vec<JsonEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonEdge {
    u: usize,
    v: usize,
    w: f64,
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph, CliError> {
    match format {
        Format::Json => parse_json(text),
        Format::Tsv => parse_tsv(text),
    }
}

fn parse_json(text: &str) -> Result<Graph, CliError> {
    let raw: JsonGraph = serde_json::from_str(text)
        .map_err(|e| CliError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    Graph::new(raw.num_nodes, raw.edges.into_iter().map(|e| (e.u, e.v, e.w)))
        .map_err(|e| CliError::Parse(e.to_string()))
}

fn parse_tsv(text: &str) -> Result<Graph, CliError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(n) = comment.trim().strip_prefix("nodes:") {
                let n = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| CliError::Parse(format!("line {lineno}: bad node count: {e}")))?;
                declared = Some(n);
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [u, v, w] = fields.as_slice() else {
            return Err(CliError::Parse(format!(
                "line {lineno}: expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        edges.push((
            field::<usize>(u, lineno, 1)?,
            field::<usize>(v, lineno, 2)?,
            field::<f64>(w, lineno, 3)?,
        ));
    }
    let inferred = edges.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(1);
    let node_count = declared.unwrap_or(inferred);
    Graph::new(node_count, edges).map_err(|e| CliError::Parse(e.to_string()))
}

fn field<T: FromStr>(raw: &str, line: usize, column: usize) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    raw.trim()
        .parse()
        .map_err(|e| CliError::Parse(format!("line {line}, field {column}: {raw:?}: {e}")))
}

pub fn write_graph(g: &Graph, format: Format) -> String {
    match format {
        Format::Json => {
            let raw = JsonGraph {
                num_nodes: g.node_count(),
                edges: g
                    .edges()
                    .map(|e| JsonEdge {
                        u: e.tail,
                        v: e.head,
                        w: e.weight,
                    })
                    .collect(),
            };
            let mut out = serde_json::to_string(&raw).expect("graphs serialize");
            out.push('\n');
            out
        }
        Format::Tsv => {
            let mut out = format!("# nodes: {}\n", g.node_count());
            for e in g.edges() {
                writeln!(out, "{}\t{}\t{}", e.tail, e.head, e.weight).unwrap();
            }
            out
        }
    }
}
