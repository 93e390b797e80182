//! Edge-list text and JSON serialization for all four graph kinds.
//!
//! Edge-list format: one `u v` pair per line (`u v w` for weighted graphs),
//! 1-based ids, `#` starts a comment, and an optional `n=<k>` line fixes the
//! node count so that isolated nodes survive a round trip.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, LoopDigraph, UndirectedGraph, WeightedDigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Undirected,
    Directed,
    Loop,
    Weighted,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Undirected => "undirected",
            Mode::Directed => "directed",
            Mode::Loop => "loop",
            Mode::Weighted => "weighted",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "undirected" => Ok(Mode::Undirected),
            "directed" => Ok(Mode::Directed),
            "loop" => Ok(Mode::Loop),
            "weighted" => Ok(Mode::Weighted),
            other => Err(Error::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

/// A parsed graph of whichever kind the mode requested.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyGraph {
    Undirected(UndirectedGraph),
    Directed(Digraph),
    Loop(LoopDigraph),
    Weighted(WeightedDigraph<f64>),
}

impl AnyGraph {
    pub fn mode(&self) -> Mode {
        match self {
            AnyGraph::Undirected(_) => Mode::Undirected,
            AnyGraph::Directed(_) => Mode::Directed,
            AnyGraph::Loop(_) => Mode::Loop,
            AnyGraph::Weighted(_) => Mode::Weighted,
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            AnyGraph::Undirected(g) => g.node_count(),
            AnyGraph::Directed(g) => g.node_count(),
            AnyGraph::Loop(g) => g.node_count(),
            AnyGraph::Weighted(g) => g.node_count(),
        }
    }

    /// Entries as 0-based `(u, v, weight)`; weight is `None` unless weighted.
    fn entries(&self) -> Vec<(usize, usize, Option<f64>)> {
        match self {
            AnyGraph::Undirected(g) => g.edges().map(|(u, v)| (u, v, None)).collect(),
            AnyGraph::Directed(g) => g.arcs().map(|(u, v)| (u, v, None)).collect(),
            AnyGraph::Loop(g) => g.arcs().map(|(u, v)| (u, v, None)).collect(),
            AnyGraph::Weighted(g) => g
                .weighted_arcs()
                .map(|(u, v, w)| (u, v, Some(*w)))
                .collect(),
        }
    }

    fn build(mode: Mode, n: usize, entries: Vec<(usize, usize, f64)>) -> Result<AnyGraph> {
        let pairs = || entries.iter().map(|&(u, v, _)| (u, v));
        Ok(match mode {
            Mode::Undirected => AnyGraph::Undirected(UndirectedGraph::from_edges(n, pairs())?),
            Mode::Directed => AnyGraph::Directed(Digraph::from_arcs(n, pairs())?),
            Mode::Loop => AnyGraph::Loop(LoopDigraph::from_arcs(n, pairs())?),
            Mode::Weighted => AnyGraph::Weighted(WeightedDigraph::from_weighted_arcs(n, entries)?),
        })
    }
}

fn malformed(line: usize, message: impl Into<String>) -> Error {
    Error::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_id(token: &str, line: usize) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(0) => Err(malformed(line, "node ids are 1-based; got 0")),
        Ok(id) => Ok(id - 1),
        Err(_) => Err(malformed(line, format!("invalid node id {token:?}"))),
    }
}

fn parse_header(body: &str) -> Option<&str> {
    let rest = body.strip_prefix('n')?.trim_start();
    Some(rest.strip_prefix('=')?.trim())
}

/// Parses an edge list in the given mode.
pub fn parse_edge_list(text: &str, mode: Mode) -> Result<AnyGraph> {
    let mut header_n: Option<usize> = None;
    let mut max_id = 0usize;
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut entries = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(value) = parse_header(body) {
            if header_n.is_some() {
                return Err(malformed(line, "repeated n=<k> header"));
            }
            let n = value
                .parse::<usize>()
                .map_err(|_| malformed(line, format!("invalid node count {value:?}")))?;
            header_n = Some(n);
            continue;
        }

        let tokens: Vec<&str> = body.split_whitespace().collect();
        let expected = if mode == Mode::Weighted { 3 } else { 2 };
        if tokens.len() != expected {
            return Err(malformed(
                line,
                format!("expected {expected} fields, found {}", tokens.len()),
            ));
        }
        let u = parse_id(tokens[0], line)?;
        let v = parse_id(tokens[1], line)?;
        let weight = if mode == Mode::Weighted {
            let w: f64 = tokens[2]
                .parse()
                .ok()
                .filter(|w: &f64| w.is_finite())
                .ok_or_else(|| malformed(line, format!("invalid weight {:?}", tokens[2])))?;
            if w < 0.0 {
                return Err(Error::NegativeWeight { weight: w }.at_line(line));
            }
            w
        } else {
            1.0
        };
        if u == v && mode != Mode::Loop {
            return Err(Error::LoopForbidden {
                node: u + 1,
                mode: mode.as_str(),
            }
            .at_line(line));
        }
        let key = if mode == Mode::Undirected {
            (u.min(v), u.max(v))
        } else {
            (u, v)
        };
        if !seen.insert(key) {
            return Err(Error::DuplicateEdge {
                u: key.0 + 1,
                v: key.1 + 1,
            }
            .at_line(line));
        }
        max_id = max_id.max(u + 1).max(v + 1);
        entries.push((u, v, weight));
    }

    let n = match header_n {
        Some(n) if n < max_id => {
            return Err(Error::NodeOutOfRange { id: max_id, n });
        }
        Some(n) => n,
        None => max_id,
    };
    AnyGraph::build(mode, n, entries)
}

/// Writes a graph as an edge list with an `n=<k>` header.
pub fn to_edge_list(g: &AnyGraph) -> String {
    let mut out = format!("n={}\n", g.node_count());
    for (u, v, w) in g.entries() {
        match w {
            Some(w) => writeln!(out, "{} {} {}", u + 1, v + 1, w),
            None => writeln!(out, "{} {}", u + 1, v + 1),
        }
        .expect("writing to String cannot fail");
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeEntry {
    Weighted(usize, usize, f64),
    Pair(usize, usize),
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphDocument {
    n: usize,
    mode: Mode,
    edges: Vec<EdgeEntry>,
}

/// `{"n": .., "mode": .., "edges": [[u, v], ..]}` with 1-based ids;
/// weighted graphs use `[u, v, w]` triples.
pub fn to_json(g: &AnyGraph) -> String {
    let doc = GraphDocument {
        n: g.node_count(),
        mode: g.mode(),
        edges: g
            .entries()
            .into_iter()
            .map(|(u, v, w)| match w {
                Some(w) => EdgeEntry::Weighted(u + 1, v + 1, w),
                None => EdgeEntry::Pair(u + 1, v + 1),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("graph document serializes")
}

pub fn from_json(text: &str) -> Result<AnyGraph> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let mut entries = Vec::with_capacity(doc.edges.len());
    for entry in doc.edges {
        let (u, v, w) = match (entry, doc.mode) {
            (EdgeEntry::Weighted(u, v, w), Mode::Weighted) => (u, v, w),
            (EdgeEntry::Pair(u, v), mode) if mode != Mode::Weighted => (u, v, 1.0),
            (_, mode) => {
                return Err(Error::Json(format!(
                    "edge arity does not match mode {}",
                    mode.as_str()
                )))
            }
        };
        if u == 0 || v == 0 {
            return Err(Error::Json("node ids are 1-based".into()));
        }
        entries.push((u - 1, v - 1, w));
    }
    AnyGraph::build(doc.mode, doc.n, entries)
}
