//! Exhaustive reference solvers for small graphs.
//!
//! Nothing here looks at the bounds or reduction rules; the only pruning is
//! the definition itself (a set missing more than `k` edges is not extended).
//! Two independent strategies are provided so they can check each other.

use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Largest candidate set [`brute_force`] accepts.
pub const MAX_ORACLE_VERTICES: usize = 24;
/// Largest candidate set [`bitmask_sweep`] accepts.
pub const MAX_SWEEP_VERTICES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle refuses {vertices} vertices (limit {limit})")]
    TooLarge { vertices: usize, limit: usize },
    #[error("required vertex {0} is not in the allowed set")]
    RequiredNotAllowed(Vertex),
    #[error("vertex {0} is not active")]
    Inactive(Vertex),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// Size of the best set; zero with an empty witness when even the
    /// required vertices miss more than `k` edges.
    pub size: usize,
    pub witness: Vec<Vertex>,
    pub nodes_enumerated: u64,
}

/// Whether `set` misses at most `k` edges in `g`.
pub fn is_k_defective(g: &Graph, k: usize, set: &[Vertex]) -> bool {
    let mut missing = 0;
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if u == v {
                return false;
            }
            if !g.adjacent(u, v) {
                missing += 1;
            }
        }
    }
    missing <= k
}

/// Local view: `allowed` relabelled to bit positions, adjacency as masks.
struct Local {
    ids: Vec<Vertex>,
    adj: Vec<u32>,
    required: u32,
}

fn localize(
    g: &Graph,
    required: &[Vertex],
    allowed: &[Vertex],
    limit: usize,
) -> Result<Local, OracleError> {
    let mut ids: Vec<Vertex> = allowed.to_vec();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() > limit {
        return Err(OracleError::TooLarge {
            vertices: ids.len(),
            limit,
        });
    }
    if let Some(&v) = ids.iter().find(|&&v| !g.is_active(v)) {
        return Err(OracleError::Inactive(v));
    }
    let mut req = 0u32;
    for &r in required {
        match ids.binary_search(&r) {
            Ok(i) => req |= 1 << i,
            Err(_) => return Err(OracleError::RequiredNotAllowed(r)),
        }
    }
    let adj = ids
        .iter()
        .map(|&u| {
            ids.iter()
                .enumerate()
                .filter(|&(_, &v)| g.adjacent(u, v))
                .fold(0u32, |m, (j, _)| m | 1 << j)
        })
        .collect();
    Ok(Local {
        ids,
        adj,
        required: req,
    })
}

impl Local {
    fn missing(&self, mask: u32) -> usize {
        let mut total = 0;
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += (rest & !self.adj[i]).count_ones() as usize;
        }
        total
    }

    fn result(&self, mask: Option<u32>, nodes: u64) -> OracleResult {
        match mask {
            Some(mask) => {
                let witness: Vec<Vertex> = (0..self.ids.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| self.ids[i])
                    .collect();
                OracleResult {
                    size: witness.len(),
                    witness,
                    nodes_enumerated: nodes,
                }
            }
            None => OracleResult {
                size: 0,
                witness: Vec::new(),
                nodes_enumerated: nodes,
            },
        }
    }
}

/// Largest `W` with `required ⊆ W ⊆ allowed` missing at most `k` edges, by
/// include/exclude recursion over the optional vertices.
pub fn brute_force(
    g: &Graph,
    k: usize,
    required: &[Vertex],
    allowed: &[Vertex],
) -> Result<OracleResult, OracleError> {
    let local = localize(g, required, allowed, MAX_ORACLE_VERTICES)?;
    let base = local.missing(local.required);
    if base > k {
        return Ok(local.result(None, 1));
    }
    let optional: Vec<usize> = (0..local.ids.len())
        .filter(|&i| local.required >> i & 1 == 0)
        .collect();

    struct Walk<'a> {
        local: &'a Local,
        optional: &'a [usize],
        k: usize,
        best: u32,
        nodes: u64,
    }

    impl Walk<'_> {
        fn go(&mut self, depth: usize, mask: u32, missing: usize) {
            self.nodes += 1;
            if mask.count_ones() > self.best.count_ones() {
                self.best = mask;
            }
            if depth == self.optional.len() {
                return;
            }
            let v = self.optional[depth];
            let extra = (mask & !self.local.adj[v]).count_ones() as usize;
            if missing + extra <= self.k {
                self.go(depth + 1, mask | 1 << v, missing + extra);
            }
            self.go(depth + 1, mask, missing);
        }
    }

    let mut walk = Walk {
        local: &local,
        optional: &optional,
        k,
        best: local.required,
        nodes: 0,
    };
    walk.go(0, local.required, base);
    let (best, nodes) = (walk.best, walk.nodes);
    Ok(local.result(Some(best), nodes))
}

/// Same contract as [`brute_force`], computed by sweeping every subset of the
/// optional vertices in increasing mask order.
pub fn bitmask_sweep(
    g: &Graph,
    k: usize,
    required: &[Vertex],
    allowed: &[Vertex],
) -> Result<OracleResult, OracleError> {
    let local = localize(g, required, allowed, MAX_SWEEP_VERTICES)?;
    let base = local.missing(local.required);
    if base > k {
        return Ok(local.result(None, 1));
    }
    let optional: Vec<usize> = (0..local.ids.len())
        .filter(|&i| local.required >> i & 1 == 0)
        .collect();
    let m = optional.len();
    // Missing edges between each optional vertex and the required block.
    let to_required: Vec<u16> = optional
        .iter()
        .map(|&v| (local.required & !local.adj[v]).count_ones() as u16)
        .collect();
    // Adjacency among optional vertices in sub-mask coordinates.
    let sub_adj: Vec<u32> = optional
        .iter()
        .map(|&v| {
            optional
                .iter()
                .enumerate()
                .filter(|&(_, &w)| local.adj[v] >> w & 1 == 1)
                .fold(0u32, |acc, (j, _)| acc | 1 << j)
        })
        .collect();

    let mut missing = vec![0u16; 1 << m];
    missing[0] = base as u16;
    let mut best_sub = 0u32;
    for sub in 1u32..(1u32 << m) {
        let low = sub.trailing_zeros() as usize;
        let rest = sub & (sub - 1);
        missing[sub as usize] = missing[rest as usize]
            + to_required[low]
            + (rest & !sub_adj[low]).count_ones() as u16;
        if missing[sub as usize] as usize <= k && sub.count_ones() > best_sub.count_ones() {
            best_sub = sub;
        }
    }
    let mut mask = local.required;
    for (j, &v) in optional.iter().enumerate() {
        if best_sub >> j & 1 == 1 {
            mask |= 1 << v;
        }
    }
    Ok(local.result(Some(mask), 1u64 << m))
}

/// Maximum k-defective clique of the whole active graph.
pub fn maximum(g: &Graph, k: usize) -> Result<OracleResult, OracleError> {
    let all: Vec<Vertex> = g.vertices().collect();
    brute_force(g, k, &[], &all)
}
