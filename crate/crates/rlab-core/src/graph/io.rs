//! Edge-list interchange format.
//!
//! A graph file is ASCII text: a header line `n m`, followed by exactly `m`
//! lines `u v` with `u < v`, one edge per line, every line newline-terminated.
//! The writer emits edges in ascending `(u, v)` order so that equal graphs
//! produce byte-identical files.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Serializes `g` in the interchange format.
pub fn write_edge_list_string(g: &Graph) -> String {
    let mut out = String::with_capacity(16 + 8 * g.m());
    out.push_str(&format!("{} {}\n", g.n(), g.m()));
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Writes `g` to `path` in the interchange format.
pub fn write_edge_list(g: &Graph, path: &Path) -> Result<()> {
    fs::write(path, write_edge_list_string(g))?;
    Ok(())
}

/// Parses a graph from interchange-format text.
pub fn read_edge_list_str(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        what: "empty input".into(),
    })?;
    let (n, m) = parse_pair(header, 1)?;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(m);
    for (idx, line) in lines.by_ref().take(m) {
        let lineno = idx + 1;
        let (u, v) = parse_pair(line, lineno)?;
        if u >= v {
            return Err(Error::Parse {
                line: lineno,
                what: format!("edge endpoints must satisfy u < v, got {u} {v}"),
            });
        }
        edges.push((u as u32, v as u32));
    }
    if edges.len() < m {
        return Err(Error::Parse {
            line: edges.len() + 1,
            what: format!("expected {m} edges, found {}", edges.len()),
        });
    }
    if let Some((idx, line)) = lines.next() {
        if !line.trim().is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                what: "trailing content after edge list".into(),
            });
        }
    }
    Graph::from_edges(n, &edges)
}

/// Reads a graph from the interchange-format file at `path`.
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    read_edge_list_str(&text)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_ascii_whitespace();
    let a = it.next().ok_or_else(|| Error::Parse {
        line: lineno,
        what: "expected two integers".into(),
    })?;
    let b = it.next().ok_or_else(|| Error::Parse {
        line: lineno,
        what: "expected two integers".into(),
    })?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            what: "expected exactly two integers".into(),
        });
    }
    let a = a.parse().map_err(|_| Error::Parse {
        line: lineno,
        what: format!("not an integer: {a}"),
    })?;
    let b = b.parse().map_err(|_| Error::Parse {
        line: lineno,
        what: format!("not an integer: {b}"),
    })?;
    Ok((a, b))
}
