//! Plain edge-list text format.
//!
//! ```text
//! # comment
//! 3
//! 0 1
//! 1 2
//! ```
//!
//! The first data line is the vertex count `n`; every further line holds one
//! edge `u v` with ids in `0..n`. `#` starts a comment anywhere on a line.

use std::fmt::Write;

use super::{Graph, GraphError};

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::Parse {
                line,
                message: format!("expected a nonnegative integer, found {s:?}"),
            })
        };
        match (n, fields.as_slice()) {
            (None, [count]) => n = Some(parse(count)?),
            (None, _) => {
                return Err(GraphError::Parse {
                    line,
                    message: "first line must hold the vertex count".into(),
                })
            }
            (Some(_), [u, v]) => pairs.push((parse(u)?, parse(v)?)),
            (Some(_), _) => {
                return Err(GraphError::Parse {
                    line,
                    message: format!("expected \"u v\", found {content:?}"),
                })
            }
        }
    }
    let n = n.ok_or(GraphError::Parse {
        line: 0,
        message: "missing vertex count".into(),
    })?;
    Graph::from_edges(n, pairs)
}

/// Canonical text: vertex count, then edges `u v` with `u < v` in sorted order.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::with_capacity(8 * (g.edge_count() + 1));
    writeln!(out, "{}", g.n()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
