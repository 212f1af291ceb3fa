//! Plain-text graph files.
//!
//! ```text
//! # unit triangle
//! graph 3
//! edge 0 1 1
//! edge 1 2 1
//! edge 2 0 1
//! ```
//!
//! Lengths are written with the shortest decimal that reads back to the same
//! `f64`, so files round-trip bit for bit.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::MetrizedGraph;

pub fn parse_graph(text: &str) -> Result<MetrizedGraph> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    let err = |line: usize, message: String| Error::Parse { line, message };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match (fields[0], header) {
            ("graph", None) => {
                let [_, v] = fields[..] else {
                    return Err(err(line, "expected `graph <v>`".into()));
                };
                let v: usize = v.parse().map_err(|_| err(line, format!("bad vertex count `{v}`")))?;
                header = Some(v);
            }
            ("graph", Some(_)) => return Err(err(line, "duplicate `graph` header".into())),
            ("edge", None) => return Err(err(line, "`edge` before `graph` header".into())),
            ("edge", Some(v)) => {
                let [_, a, b, len] = fields[..] else {
                    return Err(err(line, "expected `edge <u> <w> <length>`".into()));
                };
                let a: usize = a.parse().map_err(|_| err(line, format!("bad vertex `{a}`")))?;
                let b: usize = b.parse().map_err(|_| err(line, format!("bad vertex `{b}`")))?;
                let len: f64 = len.parse().map_err(|_| err(line, format!("bad length `{len}`")))?;
                for x in [a, b] {
                    if x >= v {
                        return Err(err(line, format!("vertex {x} out of range for {v} vertices")));
                    }
                }
                edges.push((a, b, len));
            }
            (other, _) => return Err(err(line, format!("unknown directive `{other}`"))),
        }
    }
    let v = header.ok_or_else(|| err(0, "missing `graph <v>` header".into()))?;
    MetrizedGraph::new(v, edges)
}

pub fn write_graph(g: &MetrizedGraph) -> String {
    let mut out = format!("graph {}\n", g.vertex_count());
    for e in g.edges() {
        writeln!(out, "edge {} {} {}", e.a, e.b, e.length).expect("writing to a String cannot fail");
    }
    out
}
