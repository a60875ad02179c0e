#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub const EXAMPLE_TSV: &str = "0\t1\t90\n0\t2\t40\n1\t3\t10\n2\t3\t30\n2\t4\t60\n3\t2\t50\n4\t1\t20\n4\t3\t70\n";

pub const EXAMPLE_JSON: &str = r#"{"num_nodes": 5, "edges": [
  {"u": 0, "v": 1, "w": 90}, {"u": 0, "v": 2, "w": 40}, {"u": 1, "v": 3, "w": 10},
  {"u": 2, "v": 3, "w": 30}, {"u": 2, "v": 4, "w": 60}, {"u": 3, "v": 2, "w": 50},
  {"u": 4, "v": 1, "w": 20}, {"u": 4, "v": 3, "w": 70}
]}"#;

/// A scratch file unique to this test process and `name`.
pub fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("arborist-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

pub fn arborist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arborist"))
        .args(args)
        .env_remove("ARBORIST_LOG")
        .output()
        .expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// `"weight":<w>` values from JSON-lines tree output.
pub fn weights(out: &str) -> Vec<f64> {
    out.lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            v["weight"].as_f64().unwrap()
        })
        .collect()
}
