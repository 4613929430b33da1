//! Plain-text edge-list format.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v      (m lines, 0 <= u, v < n, u != v)
//! ```
//!
//! Serialization writes edges sorted by `(min, max)` endpoint.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{LabError, Result};

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(LabError::Parse {
        line: 1,
        message: "missing header \"n m\"".into(),
    })?;
    let [n, m] = parse_pair(header_line, header, "header")?;

    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        if edges.len() == m {
            return Err(LabError::Parse {
                line,
                message: format!("more than the {m} edges declared in the header"),
            });
        }
        let [u, v] = parse_pair(line, body, "edge")?;
        for w in [u, v] {
            if w >= n {
                return Err(LabError::VertexOutOfRange { vertex: w, n });
            }
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(LabError::Parse {
            line: header_line,
            message: format!("header declares {m} edges but {} were given", edges.len()),
        });
    }
    Graph::new(n, edges)
}

fn parse_pair(line: usize, body: &str, what: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    let malformed = || LabError::Parse {
        line,
        message: format!("malformed {what} line {body:?}: expected two non-negative integers"),
    };
    if fields.len() != 2 {
        return Err(malformed());
    }
    let a = fields[0].parse().map_err(|_| malformed())?;
    let b = fields[1].parse().map_err(|_| malformed())?;
    Ok([a, b])
}

pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.num_edges()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
