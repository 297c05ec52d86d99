//! Line-oriented text format:
//!
//! ```text
//! svmgraph v1 <vertex_count>
//! # coord <u> <x1> <x2> ...     (optional, one per vertex)
//! <u> <v> <+1|-1>               (one per edge, u < v, canonical order)
//! ```

use std::fmt::Write;

use super::{GraphError, SignedGraph};
use crate::Sign;

const MAGIC: &str = "svmgraph";
const VERSION: &str = "v1";

pub(super) fn write_text(graph: &SignedGraph) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION} {}", graph.vertex_count()).unwrap();
    if let Some(labels) = graph.labels() {
        for (u, coords) in labels.iter().enumerate() {
            write!(out, "# coord {u}").unwrap();
            for c in coords {
                write!(out, " {c}").unwrap();
            }
            out.push('\n');
        }
    }
    for (u, v, s) in graph.edges() {
        writeln!(out, "{u} {v} {s}").unwrap();
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, message: message.into() }
}

pub(super) fn parse_text(text: &str) -> Result<SignedGraph, GraphError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != MAGIC || fields[1] != VERSION {
        return Err(parse_err(1, format!("expected header `{MAGIC} {VERSION} <n>`")));
    }
    let n: usize = fields[2].parse().map_err(|_| parse_err(1, "bad vertex count"))?;

    let mut labels: Vec<Option<Vec<i64>>> = vec![None; n];
    let mut any_label = false;
    let mut edges = Vec::new();
    for (no, line) in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() != Some("coord") {
                continue;
            }
            let u: usize = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(no, "bad coord vertex"))?;
            if u >= n {
                return Err(parse_err(no, format!("coord for vertex {u} out of range")));
            }
            let coords = parts
                .map(|t| t.parse::<i64>().map_err(|_| parse_err(no, format!("bad coordinate `{t}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if labels[u].replace(coords).is_some() {
                return Err(parse_err(no, format!("duplicate coord for vertex {u}")));
            }
            any_label = true;
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(parse_err(no, "expected `u v s`"));
        }
        let u: usize = parts[0].parse().map_err(|_| parse_err(no, "bad vertex"))?;
        let v: usize = parts[1].parse().map_err(|_| parse_err(no, "bad vertex"))?;
        let s = match parts[2] {
            "+1" => Sign::Plus,
            "-1" => Sign::Minus,
            other => return Err(parse_err(no, format!("sign must be +1 or -1, got `{other}`"))),
        };
        edges.push((u, v, s));
    }
    let graph = SignedGraph::from_edges(n, &edges)?;
    if !any_label {
        return Ok(graph);
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(u, l)| l.ok_or_else(|| parse_err(0, format!("vertex {u} has no coord line"))))
        .collect::<Result<Vec<_>, _>>()?;
    graph.with_labels(labels)
}
