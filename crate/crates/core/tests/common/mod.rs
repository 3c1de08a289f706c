#![allow(dead_code)]

use kdclub::{Graph, GraphOptions, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DENSITIES: [f64; 3] = [0.3, 0.5, 0.8];
pub const BUDGETS: [usize; 5] = [0, 1, 2, 3, 5];
/// (club_in_preprocess, club_in_bnb)
pub const TOGGLES: [(bool, bool); 4] = [(true, true), (true, false), (false, true), (false, false)];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_edges(n: usize, p: f64, rng: &mut impl Rng) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    Graph::new(n, &random_edges(n, p, rng)).unwrap()
}

/// Seven vertices: v0 sees v1..v5; v1..v5 form a clique minus v1v4 and
/// v3v5; v6 sees v1, v2, v3 only.
pub fn worked_example(options: GraphOptions) -> Graph {
    let mut edges = vec![(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)];
    for u in 1..=5 {
        for v in u + 1..=5 {
            if (u, v) != (1, 4) && (u, v) != (3, 5) {
                edges.push((u, v));
            }
        }
    }
    edges.extend([(6, 1), (6, 2), (6, 3)]);
    Graph::with_options(7, &edges, options).unwrap()
}

pub struct Case {
    pub graph: Graph,
    pub n: usize,
    pub density: f64,
    pub k: usize,
}

/// Deterministic small-graph corpus cycling through every density and
/// budget, with `n` drawn from `6..=18`.
pub fn corpus(count: usize, seed: u64) -> Vec<Case> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let density = DENSITIES[i % DENSITIES.len()];
            let k = BUDGETS[(i / DENSITIES.len()) % BUDGETS.len()];
            let n = r.gen_range(6..=18);
            let options = if r.gen_bool(0.5) {
                GraphOptions::always_dense()
            } else {
                GraphOptions::always_sparse()
            };
            let graph = Graph::with_options(n, &random_edges(n, density, &mut r), options).unwrap();
            Case { graph, n, density, k }
        })
        .collect()
}

/// Random `(S, C)` with `S` k-defective and disjoint from `C`.
pub fn random_state(g: &Graph, k: usize, rng: &mut impl Rng) -> (Vec<Vertex>, Vec<Vertex>) {
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.shuffle(rng);
    let want = rng.gen_range(0..=4.min(order.len()));
    let mut s = Vec::new();
    let mut rest = Vec::new();
    for v in order {
        if s.len() < want {
            s.push(v);
            if g.missing_edges(&s) > k {
                s.pop();
                rest.push(v);
            }
        } else {
            rest.push(v);
        }
    }
    let keep = rng.gen_range(0.3..=1.0);
    let c = rest.into_iter().filter(|_| rng.gen_bool(keep)).collect();
    (s, c)
}

pub fn geometric_mean(values: &[u64]) -> f64 {
    let logs: f64 = values.iter().map(|&x| (x.max(1) as f64).ln()).sum();
    (logs / values.len() as f64).exp()
}

pub fn testdata(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("testdata")
        .join(name)
}
