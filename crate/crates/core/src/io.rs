//! Graph readers for DIMACS clique files, plain edge lists and MatrixMarket
//! coordinate files, plus a DIMACS writer.
//!
//! Every reader produces an undirected simple graph on dense ids `0..n`;
//! self-loops and repeated pairs are dropped. `Instance::labels[v]` keeps the
//! id vertex `v` had in the file.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, GraphOptions, Vertex};

/// Vertex counts above this are rejected unless the caller raises the limit.
pub const DEFAULT_MAX_VERTICES: usize = 1 << 27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Dimacs,
    EdgeList,
    MatrixMarket,
    Auto,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dimacs" | "dimacs-clique" | "clq" => Ok(Format::Dimacs),
            "edge-list" | "edgelist" | "edges" | "txt" => Ok(Format::EdgeList),
            "matrix-market" | "matrixmarket" | "mtx" => Ok(Format::MatrixMarket),
            "auto" => Ok(Format::Auto),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Dimacs => "dimacs-clique",
            Format::EdgeList => "edge-list",
            Format::MatrixMarket => "matrix-market",
            Format::Auto => "auto",
        })
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("input contains no graph")]
    Empty,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex id `{id}` out of range")]
    IdOverflow { line: usize, id: String },
}

impl ParseError {
    /// 1-based line the error refers to, if any.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Malformed { line, .. } | ParseError::IdOverflow { line, .. } => Some(*line),
            _ => None,
        }
    }
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParseOptions {
    pub max_vertices: usize,
    pub graph: GraphOptions,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_vertices: DEFAULT_MAX_VERTICES,
            graph: GraphOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    /// Original id of each vertex as written in the input.
    pub labels: Vec<String>,
}

impl Instance {
    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }
}

/// Lines with their 1-based numbers, trimmed, blank lines skipped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Picks a concrete format: a DIMACS `p` header first, then a MatrixMarket
/// banner, otherwise an edge list.
pub fn detect_format(text: &str) -> Format {
    let dimacs_header = lines(text)
        .map(|(_, l)| l)
        .find(|l| !is_dimacs_comment(l))
        .is_some_and(|l| {
            let mut tokens = l.split_whitespace();
            tokens.next() == Some("p")
                && tokens
                    .next()
                    .is_some_and(|t| t.bytes().all(|b| b.is_ascii_alphabetic()))
        });
    if dimacs_header {
        return Format::Dimacs;
    }
    if text.trim_start().starts_with("%%MatrixMarket") {
        return Format::MatrixMarket;
    }
    Format::EdgeList
}

fn is_dimacs_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ") || line.starts_with("c\t")
}

fn parse_index(token: &str, line: usize, upper: usize) -> Result<usize, ParseError> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed(line, format!("expected an integer, found `{token}`")));
    }
    match token.parse::<usize>() {
        Ok(x) if x <= upper => Ok(x),
        _ => Err(ParseError::IdOverflow {
            line,
            id: token.to_string(),
        }),
    }
}

fn one_based(token: &str, line: usize, n: usize) -> Result<Vertex, ParseError> {
    match parse_index(token, line, n)? {
        0 => Err(ParseError::IdOverflow {
            line,
            id: token.to_string(),
        }),
        x => Ok(x - 1),
    }
}

fn numbered_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

fn build(
    n: usize,
    edges: &[(Vertex, Vertex)],
    labels: Vec<String>,
    options: &ParseOptions,
) -> Instance {
    let graph = Graph::with_options(n, edges, options.graph).expect("ids checked while parsing");
    Instance { graph, labels }
}

pub fn parse_dimacs(text: &str, options: &ParseOptions) -> Result<Instance, ParseError> {
    let mut order: Option<usize> = None;
    let mut edges = Vec::new();
    for (no, line) in lines(text) {
        if is_dimacs_comment(line) {
            continue;
        }
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("p") => {
                if order.is_some() {
                    return Err(malformed(no, "second `p` line"));
                }
                let kind = tokens.next().unwrap_or("");
                if !matches!(kind, "edge" | "edges" | "col" | "clq") {
                    return Err(malformed(no, format!("unsupported problem type `{kind}`")));
                }
                let n = parse_index(tokens.next().unwrap_or(""), no, options.max_vertices)?;
                let m = tokens.next().unwrap_or("");
                if m.parse::<u64>().is_err() {
                    return Err(malformed(no, format!("bad edge count `{m}`")));
                }
                if tokens.next().is_some() {
                    return Err(malformed(no, "trailing tokens after header"));
                }
                order = Some(n);
                edges.reserve(m.parse::<usize>().unwrap_or(0).min(1 << 20));
            }
            Some("e") => {
                let Some(n) = order else {
                    return Err(malformed(no, "edge before `p` line"));
                };
                let (Some(u), Some(v), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                    return Err(malformed(no, "expected `e <u> <v>`"));
                };
                edges.push((one_based(u, no, n)?, one_based(v, no, n)?));
            }
            Some("n") => {}
            Some(other) => {
                return Err(malformed(no, format!("unknown line type `{other}`")));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    let n = order.ok_or(ParseError::Empty)?;
    Ok(build(n, &edges, numbered_labels(n), options))
}

pub fn parse_edge_list(text: &str, options: &ParseOptions) -> Result<Instance, ParseError> {
    let mut ids: HashMap<&str, Vertex> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    for (no, line) in lines(text) {
        if line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split(|c: char| c.is_whitespace() || c == ',');
        let mut tokens = std::iter::from_fn(|| tokens.find(|t| !t.is_empty()));
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(malformed(no, "expected two vertex ids"));
        };
        let mut end = [0; 2];
        for (slot, token) in end.iter_mut().zip([a, b]) {
            *slot = match ids.get(token) {
                Some(&v) => v,
                None => {
                    if labels.len() >= options.max_vertices {
                        return Err(ParseError::IdOverflow {
                            line: no,
                            id: token.to_string(),
                        });
                    }
                    let v = labels.len();
                    ids.insert(token, v);
                    labels.push(token.to_string());
                    v
                }
            };
        }
        edges.push((end[0], end[1]));
    }
    if labels.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(build(labels.len(), &edges, labels, options))
}

pub fn parse_matrix_market(text: &str, options: &ParseOptions) -> Result<Instance, ParseError> {
    let mut rows = lines(text);
    let Some((no, banner)) = rows.next() else {
        return Err(ParseError::Empty);
    };
    let words: Vec<String> = banner
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if words.first().map(String::as_str) != Some("%%matrixmarket") {
        return Err(malformed(no, "missing %%MatrixMarket banner"));
    }
    if words.get(1).map(String::as_str) != Some("matrix")
        || words.get(2).map(String::as_str) != Some("coordinate")
    {
        return Err(malformed(no, "only `matrix coordinate` files are supported"));
    }
    let mut rows = rows.filter(|(_, l)| !l.starts_with('%'));
    let Some((no, size)) = rows.next() else {
        return Err(ParseError::Empty);
    };
    let dims: Vec<&str> = size.split_whitespace().collect();
    if dims.len() != 3 {
        return Err(malformed(no, "expected `<rows> <cols> <entries>`"));
    }
    let r = parse_index(dims[0], no, options.max_vertices)?;
    let c = parse_index(dims[1], no, options.max_vertices)?;
    parse_index(dims[2], no, usize::MAX)?;
    let n = r.max(c);
    let mut edges = Vec::new();
    for (no, line) in rows {
        let mut tokens = line.split_whitespace();
        let (Some(i), Some(j)) = (tokens.next(), tokens.next()) else {
            return Err(malformed(no, "expected `<row> <col> [value]`"));
        };
        edges.push((one_based(i, no, r)?, one_based(j, no, c)?));
    }
    Ok(build(n, &edges, numbered_labels(n), options))
}

pub fn parse_str(text: &str, format: Format, options: &ParseOptions) -> Result<Instance, ParseError> {
    let format = match format {
        Format::Auto => detect_format(text),
        f => f,
    };
    match format {
        Format::Dimacs => parse_dimacs(text, options),
        Format::EdgeList => parse_edge_list(text, options),
        Format::MatrixMarket => parse_matrix_market(text, options),
        Format::Auto => unreachable!(),
    }
}

/// Like [`parse_str`] but rejects input that is not UTF-8.
pub fn parse_bytes(
    bytes: &[u8],
    format: Format,
    options: &ParseOptions,
) -> Result<Instance, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        malformed(line, "input is not valid UTF-8")
    })?;
    parse_str(text, format, options)
}

pub fn read_instance(path: &Path, format: Format) -> Result<Instance, ParseError> {
    let bytes = fs::read(path)?;
    parse_bytes(&bytes, format, &ParseOptions::default())
}

/// Writes the active part of `g` in DIMACS clique format. Deleted vertices
/// are squeezed out, so ids are renumbered in increasing order.
pub fn write_dimacs<W: Write>(g: &Graph, out: &mut W) -> std::io::Result<()> {
    let mut id = vec![0usize; g.order()];
    for (i, v) in g.vertices().enumerate() {
        id[v] = i + 1;
    }
    let edges = g.edges();
    writeln!(out, "p edge {} {}", g.vertex_count(), edges.len())?;
    for (u, v) in edges {
        writeln!(out, "e {} {}", id[u], id[v])?;
    }
    Ok(())
}
