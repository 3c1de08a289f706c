//! One row per solver run, emitted as CSV, JSON or an aligned text table.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::search::{SolveResult, SolveStatus, SolverConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub vertices: usize,
    pub edges: usize,
    pub k: usize,
    pub reduced_vertices: usize,
    pub reduced_edges: usize,
    pub best_size: usize,
    pub status: SolveStatus,
    pub tree_nodes: u64,
    /// Seconds, millisecond resolution.
    pub preprocess_time: f64,
    pub total_time: f64,
    pub config: String,
}

/// Column names in emission order.
pub const COLUMNS: [&str; 12] = [
    "instance",
    "vertices",
    "edges",
    "k",
    "reduced_vertices",
    "reduced_edges",
    "best_size",
    "status",
    "tree_nodes",
    "preprocess_time",
    "total_time",
    "config",
];

pub fn seconds(d: Duration) -> f64 {
    (d.as_secs_f64() * 1000.0).round() / 1000.0
}

impl RunRecord {
    pub fn new(instance: &str, g: &Graph, config: &SolverConfig, result: &SolveResult) -> Self {
        RunRecord {
            instance: instance.to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            k: config.k,
            reduced_vertices: result.reduced_vertices,
            reduced_edges: result.reduced_edges,
            best_size: result.best_size,
            status: result.status,
            tree_nodes: result.tree_nodes,
            preprocess_time: seconds(result.preprocess_time),
            total_time: seconds(result.total_time),
            config: config.fingerprint(),
        }
    }

    /// Copy with both timing columns zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        RunRecord {
            preprocess_time: 0.0,
            total_time: 0.0,
            ..self.clone()
        }
    }

    fn cells(&self) -> [String; 12] {
        [
            self.instance.clone(),
            self.vertices.to_string(),
            self.edges.to_string(),
            self.k.to_string(),
            self.reduced_vertices.to_string(),
            self.reduced_edges.to_string(),
            self.best_size.to_string(),
            self.status.to_string(),
            self.tree_nodes.to_string(),
            format!("{:.3}", self.preprocess_time),
            format!("{:.3}", self.total_time),
            self.config.clone(),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Csv,
    Json,
    Table,
}

impl std::str::FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Emit::Csv),
            "json" => Ok(Emit::Json),
            "table" => Ok(Emit::Table),
            other => Err(format!("unknown output format `{other}`")),
        }
    }
}

pub fn emit_records(records: &[RunRecord], format: Emit) -> Vec<u8> {
    match format {
        Emit::Csv => to_csv(records),
        Emit::Json => {
            let mut out = serde_json::to_vec_pretty(records).expect("records serialize");
            out.push(b'\n');
            out
        }
        Emit::Table => to_table(records).into_bytes(),
    }
}

fn to_csv(records: &[RunRecord]) -> Vec<u8> {
    // serde's header row is only written with the first record, so write it
    // by hand to get a header for an empty run set too.
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for r in records {
        w.serialize(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn to_table(records: &[RunRecord]) -> String {
    let rows: Vec<[String; 12]> = records.iter().map(RunRecord::cells).collect();
    let mut width: Vec<usize> = COLUMNS.iter().map(|c| c.len()).collect();
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&width)
            .enumerate()
            .map(|(i, (c, &w))| {
                if i == 0 || i == 7 || i == 11 {
                    format!("{c:<w$}")
                } else {
                    format!("{c:>w$}")
                }
            })
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&COLUMNS);
    for row in &rows {
        let cells: Vec<&str> = row.iter().map(String::as_str).collect();
        line(&cells);
    }
    out
}

/// Parses CSV produced by [`emit_records`].
pub fn read_csv(bytes: &[u8]) -> Result<Vec<RunRecord>, csv::Error> {
    csv::Reader::from_reader(bytes).deserialize().collect()
}

/// Parses JSON produced by [`emit_records`].
pub fn read_json(bytes: &[u8]) -> Result<Vec<RunRecord>, serde_json::Error> {
    serde_json::from_slice(bytes)
}
