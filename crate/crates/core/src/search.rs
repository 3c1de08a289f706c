//! Branch-and-bound search for a maximum k-defective clique.
//!
//! [`solve`] runs the whole pipeline: a greedy lower bound, reduction of the
//! input graph against it, then binary branching on a minimum-degree
//! candidate (add it to the partial solution, or delete it), pruning every
//! node whose upper bound does not beat the incumbent.

use std::cmp::Reverse;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::bound::{BoundKind, ColorBound};
use crate::graph::{Graph, GraphOptions, Vertex};
use crate::reduce::{preprocess, ReduceConfig, ReductionStats};

/// Number of seed vertices tried by [`fast_lb`].
pub const FAST_LB_SEEDS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub k: usize,
    pub time_limit: Duration,
    /// Zero keeps the lowest-id tie-break when choosing a branching vertex;
    /// any other value shuffles the tie-break order reproducibly.
    pub seed: u64,
    pub club_in_preprocess: bool,
    pub club_in_bnb: bool,
    /// Density at or above which the reduced graph uses the bit-matrix layout.
    pub density_threshold: f64,
    /// Also delete candidates by the degree bound at every search node.
    pub node_bound_reduction: bool,
    pub edge_club_budget: Option<usize>,
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            k: 1,
            time_limit: Duration::from_secs(1800),
            seed: 0,
            club_in_preprocess: true,
            club_in_bnb: true,
            density_threshold: GraphOptions::default().density_threshold,
            node_bound_reduction: false,
            edge_club_budget: None,
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn with_k(k: usize) -> Self {
        SolverConfig {
            k,
            ..SolverConfig::default()
        }
    }

    /// Short description of the toggles that change search behaviour.
    pub fn fingerprint(&self) -> String {
        let flag = |b: bool| if b { "on" } else { "off" };
        format!(
            "club_pre={};club_bnb={};seed={}",
            flag(self.club_in_preprocess),
            flag(self.club_in_bnb),
            self.seed
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    Timeout,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub best_size: usize,
    /// Sorted vertex ids of a k-defective clique of size `best_size` in the
    /// input graph.
    pub witness: Vec<Vertex>,
    pub status: SolveStatus,
    pub tree_nodes: u64,
    pub initial_lower_bound: usize,
    pub preprocess_time: Duration,
    pub total_time: Duration,
    pub reduced_vertices: usize,
    pub reduced_edges: usize,
    pub reduction: ReductionStats,
}

/// Vertex order produced by repeatedly deleting a vertex of minimum degree.
/// Vertices late in the order sit in the densest cores.
pub fn degeneracy_order(g: &Graph) -> Vec<Vertex> {
    let mut degree = vec![0usize; g.order()];
    let mut buckets: Vec<Vec<Vertex>> = Vec::new();
    for v in g.vertices() {
        degree[v] = g.degree(v);
        if buckets.len() <= degree[v] {
            buckets.resize(degree[v] + 1, Vec::new());
        }
        buckets[degree[v]].push(v);
    }
    for b in buckets.iter_mut() {
        b.reverse();
    }
    let mut done = BitSet::new(g.order());
    let mut order = Vec::with_capacity(g.vertex_count());
    let mut cur = 0;
    while order.len() < g.vertex_count() {
        while buckets[cur].is_empty() {
            cur += 1;
        }
        let v = buckets[cur].pop().unwrap();
        if done.contains(v) || degree[v] != cur {
            continue;
        }
        done.insert(v);
        order.push(v);
        for w in g.neighbors(v) {
            if !done.contains(w) {
                degree[w] -= 1;
                buckets[degree[w]].push(w);
            }
        }
        cur = cur.saturating_sub(1);
    }
    order
}

/// Greedy lower bound. From each of the [`FAST_LB_SEEDS`] vertices deepest in
/// the degeneracy order, grows a k-defective clique by repeatedly adding the
/// feasible candidate that misses the fewest solution vertices, preferring
/// high degree inside the remaining candidate set. Returns the best size and
/// its vertices.
pub fn fast_lb(g: &Graph, k: usize) -> (usize, Vec<Vertex>) {
    let order = degeneracy_order(g);
    let mut best: Vec<Vertex> = Vec::new();
    let mut grower = Grower::new(g.order());
    for &seed in order.iter().rev().take(FAST_LB_SEEDS) {
        let found = grower.grow(g, k, seed);
        if found.len() > best.len() {
            best = found;
        }
    }
    best.sort_unstable();
    (best.len(), best)
}

struct Grower {
    misses: Vec<usize>,
    pool_degree: Vec<usize>,
    in_pool: BitSet,
}

impl Grower {
    fn new(order: usize) -> Self {
        Grower {
            misses: vec![0; order],
            pool_degree: vec![0; order],
            in_pool: BitSet::new(order),
        }
    }

    fn leave_pool(&mut self, g: &Graph, x: Vertex) {
        self.in_pool.remove(x);
        for w in g.neighbors(x) {
            if self.in_pool.contains(w) {
                self.pool_degree[w] -= 1;
            }
        }
    }

    fn grow(&mut self, g: &Graph, k: usize, seed: Vertex) -> Vec<Vertex> {
        self.in_pool.clear();
        let mut pool: Vec<Vertex> = g.vertices().filter(|&v| v != seed).collect();
        for &x in &pool {
            self.in_pool.insert(x);
            let adj = g.adjacent(x, seed);
            self.misses[x] = usize::from(!adj);
            self.pool_degree[x] = g.degree(x) - usize::from(adj);
        }
        let mut solution = vec![seed];
        let mut missing = 0;
        let mut dropped = Vec::new();
        loop {
            let kappa = k - missing;
            dropped.clear();
            pool.retain(|&x| {
                let keep = self.misses[x] <= kappa;
                if !keep {
                    dropped.push(x);
                }
                keep
            });
            for &x in &dropped {
                self.leave_pool(g, x);
            }
            let Some(&pick) = pool
                .iter()
                .min_by_key(|&&x| (self.misses[x], Reverse(self.pool_degree[x]), x))
            else {
                break;
            };
            solution.push(pick);
            missing += self.misses[pick];
            pool.retain(|&x| x != pick);
            self.leave_pool(g, pick);
            for &x in &pool {
                if !g.adjacent(x, pick) {
                    self.misses[x] += 1;
                }
            }
        }
        debug_assert!(g.missing_edges(&solution) <= k);
        solution
    }
}

/// What [`node_reduction`] deleted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Removals {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Vertex, Vertex)>,
}

#[derive(Debug, Clone, Copy)]
pub struct BnbSettings {
    pub k: usize,
    pub use_club: bool,
    pub node_bound_reduction: bool,
    pub seed: u64,
    pub deadline: Option<Instant>,
}

impl BnbSettings {
    pub fn new(k: usize) -> Self {
        BnbSettings {
            k,
            use_club: true,
            node_bound_reduction: false,
            seed: 0,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnbOutcome {
    /// `max(lb, size of the best solution found)`.
    pub best_size: usize,
    /// Vertices of a solution of size `best_size`, when one larger than the
    /// initial `lb` was found.
    pub witness: Option<Vec<Vertex>>,
    pub tree_nodes: u64,
    pub timed_out: bool,
}

/// A search node cut off because its upper bound did not exceed the
/// incumbent.
pub struct PruneEvent<'a> {
    pub graph: &'a Graph,
    pub solution: &'a [Vertex],
    pub upper_bound: usize,
    pub lower_bound: usize,
}

type Observer<'o> = &'o mut dyn FnMut(&PruneEvent<'_>);

struct Search<'g, 'o> {
    g: &'g mut Graph,
    k: usize,
    lb: usize,
    best: Option<Vec<Vertex>>,
    s: Vec<Vertex>,
    s_set: BitSet,
    missing: usize,
    deficiency: Vec<usize>,
    candidates: Vec<Vertex>,
    classes: Vec<Vec<Vertex>>,
    bound: ColorBound,
    rank: Vec<u32>,
    kind: BoundKind,
    node_bound_reduction: bool,
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
    observer: Option<Observer<'o>>,
    log: Option<Removals>,
}

impl<'g, 'o> Search<'g, 'o> {
    fn new(g: &'g mut Graph, s: &[Vertex], lb: usize, settings: &BnbSettings) -> Self {
        let order = g.order();
        let mut rank: Vec<u32> = (0..order as u32).collect();
        if settings.seed != 0 {
            rank.shuffle(&mut ChaCha8Rng::seed_from_u64(settings.seed));
        }
        let missing = g.missing_edges(s);
        assert!(missing <= settings.k, "partial solution is not k-defective");
        Search {
            k: settings.k,
            lb,
            best: None,
            s: s.to_vec(),
            s_set: BitSet::from_iter(order, s.iter().copied()),
            missing,
            deficiency: vec![0; order],
            candidates: Vec::new(),
            classes: vec![Vec::new(); settings.k + 1],
            bound: ColorBound::new(),
            rank,
            kind: if settings.use_club {
                BoundKind::Coloring
            } else {
                BoundKind::Clique
            },
            node_bound_reduction: settings.node_bound_reduction,
            deadline: settings.deadline,
            nodes: 0,
            timed_out: false,
            observer: None,
            log: None,
            g,
        }
    }

    fn collect_candidates(&mut self) {
        self.candidates.clear();
        let s_len = self.s.len();
        for v in self.g.active().iter() {
            if self.s_set.contains(v) {
                continue;
            }
            self.deficiency[v] = s_len - self.g.count_neighbors_in(v, &self.s_set);
            self.candidates.push(v);
        }
    }

    fn drop_vertex(&mut self, v: Vertex) {
        self.g.remove_vertex(v);
        if let Some(log) = self.log.as_mut() {
            log.vertices.push(v);
        }
    }

    /// Deletes candidates that cannot join `S`, then edges whose endpoints
    /// cannot join `S` together. Expects fresh deficiencies.
    fn reduce(&mut self) {
        let kappa = self.k - self.missing;
        let mut widest = 0;
        for i in 0..self.candidates.len() {
            let v = self.candidates[i];
            if self.deficiency[v] > kappa {
                self.drop_vertex(v);
            } else {
                widest = widest.max(self.deficiency[v]);
            }
        }
        if 2 * widest > kappa {
            let mut doomed = Vec::new();
            for &u in &self.candidates {
                if !self.g.is_active(u) || 2 * self.deficiency[u] <= kappa {
                    continue;
                }
                doomed.clear();
                doomed.extend(self.g.neighbors(u).filter(|&w| {
                    !self.s_set.contains(w) && self.deficiency[u] + self.deficiency[w] > kappa
                }));
                for &w in &doomed {
                    self.g.remove_edge(u, w);
                    if let Some(log) = self.log.as_mut() {
                        log.edges.push((u.min(w), u.max(w)));
                    }
                }
            }
        }
        if self.node_bound_reduction {
            let s_len = self.s.len();
            for i in 0..self.candidates.len() {
                let v = self.candidates[i];
                if !self.g.is_active(v) {
                    continue;
                }
                let pool = self.g.vertex_count() - s_len;
                let inside = self.g.degree(v) - (s_len - self.deficiency[v]);
                let rem = kappa - self.deficiency[v];
                if s_len + 1 + inside + rem.min(pool - 1 - inside) <= self.lb {
                    self.drop_vertex(v);
                }
            }
        }
    }

    fn expired(&mut self) -> bool {
        if !self.timed_out {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    fn node(&mut self, branched: bool) {
        self.nodes += 1;
        if self.expired() {
            return;
        }
        if self.s.len() > self.lb {
            self.lb = self.s.len();
            self.best = Some(self.s.clone());
        }
        let checkpoint = self.g.checkpoint();
        self.collect_candidates();
        if branched {
            self.reduce();
        }
        if self.g.vertex_count() <= self.lb {
            self.g.rollback(checkpoint);
            return;
        }

        let kappa = self.k - self.missing;
        self.classes.iter_mut().for_each(Vec::clear);
        let mut branch: Option<(usize, u32, Vertex)> = None;
        for &v in &self.candidates {
            if !self.g.is_active(v) {
                continue;
            }
            if let Some(class) = self.classes.get_mut(self.deficiency[v]) {
                class.push(v);
            }
            let key = (self.g.degree(v), self.rank[v], v);
            if branch.is_none_or(|b| key < b) {
                branch = Some(key);
            }
        }
        let ub = self
            .bound
            .bound(self.g, self.k, self.s.len(), kappa, &self.classes, self.kind);
        if ub <= self.lb {
            if let Some(observer) = self.observer.as_mut() {
                observer(&PruneEvent {
                    graph: self.g,
                    solution: &self.s,
                    upper_bound: ub,
                    lower_bound: self.lb,
                });
            }
            self.g.rollback(checkpoint);
            return;
        }
        let Some((_, _, u)) = branch else {
            self.g.rollback(checkpoint);
            return;
        };

        let cost = self.deficiency[u];
        self.s.push(u);
        self.s_set.insert(u);
        self.missing += cost;
        self.node(true);
        self.s.pop();
        self.s_set.remove(u);
        self.missing -= cost;

        if !self.timed_out {
            self.g.remove_vertex(u);
            self.node(true);
        }
        self.g.rollback(checkpoint);
    }
}

/// Runs the branch-and-bound from partial solution `s` on `g`, which is
/// restored before returning. Returns `max(lb, ω(S))` unless interrupted.
pub fn branch_and_bound(
    g: &mut Graph,
    s: &[Vertex],
    lb: usize,
    settings: &BnbSettings,
) -> BnbOutcome {
    run(g, s, lb, settings, None)
}

/// [`branch_and_bound`] that reports every pruned node to `observer`.
pub fn branch_and_bound_observed(
    g: &mut Graph,
    s: &[Vertex],
    lb: usize,
    settings: &BnbSettings,
    observer: &mut dyn FnMut(&PruneEvent<'_>),
) -> BnbOutcome {
    run(g, s, lb, settings, Some(observer))
}

fn run(
    g: &mut Graph,
    s: &[Vertex],
    lb: usize,
    settings: &BnbSettings,
    observer: Option<Observer<'_>>,
) -> BnbOutcome {
    let mut search = Search::new(g, s, lb, settings);
    search.observer = observer;
    search.node(!s.is_empty());
    let best_size = search.lb;
    BnbOutcome {
        best_size,
        witness: search.best.take(),
        tree_nodes: search.nodes,
        timed_out: search.timed_out,
    }
}

/// Deletes from `g` every vertex `v` outside `s` for which `S ∪ {v}` misses
/// more than `k` edges, and every edge `(u, w)` outside `s` for which
/// `S ∪ {u, w}` does. With `bound_reduction`, also deletes candidates whose
/// degree bound is at most `lb`.
pub fn node_reduction(
    g: &mut Graph,
    k: usize,
    s: &[Vertex],
    lb: usize,
    bound_reduction: bool,
) -> Removals {
    let settings = BnbSettings {
        node_bound_reduction: bound_reduction,
        ..BnbSettings::new(k)
    };
    let mut search = Search::new(g, s, lb, &settings);
    search.log = Some(Removals::default());
    search.collect_candidates();
    search.reduce();
    search.log.take().unwrap()
}

/// Finds a maximum k-defective clique of `g`.
pub fn solve(g: &Graph, config: &SolverConfig) -> SolveResult {
    let start = Instant::now();
    let deadline = start.checked_add(config.time_limit);
    let k = config.k;

    let (initial, mut witness) = fast_lb(g, k);
    let mut work = g.clone();
    work.commit();
    let reduction = preprocess(
        &mut work,
        k,
        initial,
        &ReduceConfig {
            use_club: config.club_in_preprocess,
            edge_club_budget: config.edge_club_budget,
            deadline,
        },
    );
    let preprocess_time = start.elapsed();
    let options = GraphOptions {
        density_threshold: config.density_threshold,
        ..GraphOptions::default()
    };
    let (mut reduced, ids) = work.compact(options);
    drop(work);
    let reduced_vertices = reduced.vertex_count();
    let reduced_edges = reduced.edge_count();
    if config.trace {
        eprintln!(
            "lb={initial} reduced to |V'|={reduced_vertices} |E'|={reduced_edges} in {:.3}s",
            preprocess_time.as_secs_f64()
        );
    }

    let settings = BnbSettings {
        k,
        use_club: config.club_in_bnb,
        node_bound_reduction: config.node_bound_reduction,
        seed: config.seed,
        deadline,
    };
    let outcome = branch_and_bound(&mut reduced, &[], initial, &settings);
    if let Some(found) = outcome.witness {
        witness = found.into_iter().map(|v| ids[v]).collect();
        witness.sort_unstable();
    }
    assert_eq!(witness.len(), outcome.best_size);
    assert!(
        g.missing_edges(&witness) <= k,
        "solver produced an infeasible witness"
    );
    let status = if reduction.timed_out || outcome.timed_out {
        SolveStatus::Timeout
    } else {
        SolveStatus::Optimal
    };
    SolveResult {
        best_size: witness.len(),
        witness,
        status,
        tree_nodes: outcome.tree_nodes,
        initial_lower_bound: initial,
        preprocess_time,
        total_time: start.elapsed(),
        reduced_vertices,
        reduced_edges,
        reduction,
    }
}
