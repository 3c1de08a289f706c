//! Graph reduction against a known lower bound.
//!
//! Four deletion rules are applied until none of them fires:
//!
//! 1. delete vertex `v` if the degree bound for `{v}` is at most `lb`;
//! 2. delete edge `(u, v)` if the degree bound for `{u, v}` is at most `lb`;
//! 3. delete vertex `v` if the coloring bound for `S = {v}` is at most `lb`;
//! 4. delete edge `(u, v)` if the coloring bound for `S = {u, v}` is at most `lb`.
//!
//! Rules 3 and 4 are only tried on elements that survive rules 1 and 2.
//! Every k-defective clique larger than `lb` survives the reduction.

use std::collections::{HashSet, VecDeque};
use std::time::{Duration, Instant};

use crate::bound::{BoundKind, ColorBound};
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReduceConfig {
    /// Enables rules 3 and 4.
    pub use_club: bool,
    /// Cap on rule-4 evaluations per edge pass; once spent, the pass falls
    /// back to rule 2 alone.
    pub edge_club_budget: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Default for ReduceConfig {
    fn default() -> Self {
        ReduceConfig {
            use_club: true,
            edge_club_budget: None,
            deadline: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub vertices_rule1: usize,
    pub vertices_rule3: usize,
    pub edges_rule2: usize,
    pub edges_rule4: usize,
    /// Iterations of the combined vertex/edge loop.
    pub passes: usize,
    pub elapsed: Duration,
    /// The deadline interrupted the reduction before a fixed point.
    pub timed_out: bool,
}

impl ReductionStats {
    pub fn vertices_removed(&self) -> usize {
        self.vertices_rule1 + self.vertices_rule3
    }

    pub fn edges_removed(&self) -> usize {
        self.edges_rule2 + self.edges_rule4
    }
}

#[inline]
fn rule1_fires(g: &Graph, k: usize, lb: usize, v: Vertex) -> bool {
    let d = g.degree(v);
    let others = g.vertex_count() - 1 - d;
    1 + d + k.min(others) <= lb
}

#[inline]
fn rule2_fires(g: &Graph, k: usize, lb: usize, u: Vertex, v: Vertex) -> bool {
    let common = g.common_neighbor_count(u, v);
    let others = g.vertex_count() - 2 - common;
    2 + common + k.min(others) <= lb
}

/// Far classes (candidates missing every vertex of `S`) larger than this are
/// counted rather than colored, so one rule check costs time proportional to
/// the degrees involved instead of to the whole graph.
pub const FAR_CLASS_LIMIT: usize = 1 << 14;

fn rule3_fires(g: &Graph, k: usize, lb: usize, v: Vertex, scratch: &mut Scratch) -> bool {
    scratch.reset(k);
    scratch.classes[0].extend(g.neighbors(v));
    let far = g.vertex_count() - 1 - g.degree(v);
    let mut lumped = None;
    if k >= 1 && far > 0 {
        if far > FAR_CLASS_LIMIT {
            lumped = Some((1, far));
        } else {
            scratch.classes[1].extend(g.vertices().filter(|&w| w != v && !g.adjacent(v, w)));
        }
    }
    let lumped: &[(usize, usize)] = lumped.as_slice();
    scratch
        .bound
        .bound_lumped(g, k, 1, k, &scratch.classes, BoundKind::Coloring, lumped)
        <= lb
}

fn rule4_fires(g: &Graph, k: usize, lb: usize, u: Vertex, v: Vertex, scratch: &mut Scratch) -> bool {
    scratch.reset(k);
    for (a, b) in [(u, v), (v, u)] {
        for w in g.neighbors(a) {
            if w == b {
                continue;
            }
            if g.adjacent(b, w) {
                if a == u {
                    scratch.classes[0].push(w);
                }
            } else if k >= 1 {
                scratch.classes[1].push(w);
            }
        }
    }
    // |N(u) ∪ N(v)| without u and v themselves
    let near = g.degree(u) + g.degree(v) - 2 - scratch.classes[0].len();
    let far = g.vertex_count() - 2 - near;
    let mut lumped = None;
    if k >= 2 && far > 0 {
        if far > FAR_CLASS_LIMIT {
            lumped = Some((2, far));
        } else {
            scratch.classes[2].extend(
                g.vertices()
                    .filter(|&w| w != u && w != v && !g.adjacent(u, w) && !g.adjacent(v, w)),
            );
        }
    }
    let lumped: &[(usize, usize)] = lumped.as_slice();
    scratch
        .bound
        .bound_lumped(g, k, 2, k, &scratch.classes, BoundKind::Coloring, lumped)
        <= lb
}

/// Whether the degree rule (rule 1) deletes `v` from `g` as it stands.
pub fn degree_rule_deletes(g: &Graph, k: usize, lb: usize, v: Vertex) -> bool {
    rule1_fires(g, k, lb, v)
}

/// Whether the coloring rule (rule 3) deletes `v` from `g` as it stands.
pub fn coloring_rule_deletes(g: &Graph, k: usize, lb: usize, v: Vertex) -> bool {
    rule3_fires(g, k, lb, v, &mut Scratch::default())
}

/// Whether the degree rule for edges (rule 2) deletes `(u, v)`.
pub fn degree_rule_deletes_edge(g: &Graph, k: usize, lb: usize, u: Vertex, v: Vertex) -> bool {
    rule2_fires(g, k, lb, u, v)
}

/// Whether the coloring rule for edges (rule 4) deletes `(u, v)`.
pub fn coloring_rule_deletes_edge(g: &Graph, k: usize, lb: usize, u: Vertex, v: Vertex) -> bool {
    rule4_fires(g, k, lb, u, v, &mut Scratch::default())
}

#[derive(Default)]
struct Scratch {
    bound: ColorBound,
    classes: Vec<Vec<Vertex>>,
}

impl Scratch {
    fn reset(&mut self, k: usize) {
        self.classes.iter_mut().for_each(Vec::clear);
        self.classes.resize(k.max(2) + 1, Vec::new());
    }
}

struct Clock {
    deadline: Option<Instant>,
    ticks: u32,
}

impl Clock {
    fn expired(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        match self.deadline {
            Some(d) if self.ticks.is_multiple_of(64) => Instant::now() >= d,
            _ => false,
        }
    }
}

/// Deletes vertices by rule 1, and by rule 3 when `use_club`, until neither
/// fires on any vertex. Each pass is queue-driven: every active vertex is
/// checked once and the neighbors of each deleted vertex again; passes repeat
/// because both rules also depend on non-neighbors. Returns the number of
/// deleted vertices.
pub fn check_vertices(
    g: &mut Graph,
    k: usize,
    lb: usize,
    use_club: bool,
    stats: &mut ReductionStats,
) -> usize {
    let mut scratch = Scratch::default();
    let mut clock = Clock {
        deadline: None,
        ticks: 0,
    };
    let mut total = 0;
    loop {
        let removed = vertex_pass(g, k, lb, use_club, stats, &mut scratch, &mut clock);
        if removed == 0 {
            return total;
        }
        total += removed;
    }
}

fn vertex_pass(
    g: &mut Graph,
    k: usize,
    lb: usize,
    use_club: bool,
    stats: &mut ReductionStats,
    scratch: &mut Scratch,
    clock: &mut Clock,
) -> usize {
    let mut queue: VecDeque<Vertex> = g.vertices().collect();
    let mut queued = g.active().clone();
    let mut removed = 0;
    while let Some(v) = queue.pop_front() {
        queued.remove(v);
        if !g.is_active(v) {
            continue;
        }
        if clock.expired() {
            stats.timed_out = true;
            break;
        }
        let fired = if rule1_fires(g, k, lb, v) {
            stats.vertices_rule1 += 1;
            true
        } else if use_club && rule3_fires(g, k, lb, v, scratch) {
            stats.vertices_rule3 += 1;
            true
        } else {
            false
        };
        if fired {
            let nbrs: Vec<Vertex> = g.neighbors(v).collect();
            g.remove_vertex(v);
            removed += 1;
            for w in nbrs {
                if queued.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    removed
}

#[inline]
fn key(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Deletes edges by rule 2, and by rule 4 when `use_club`, until neither
/// fires on any edge. Each pass checks every live edge once and re-checks the
/// edges touching the endpoints of each deleted edge. Returns the number of
/// deleted edges.
pub fn check_edges(
    g: &mut Graph,
    k: usize,
    lb: usize,
    use_club: bool,
    stats: &mut ReductionStats,
) -> usize {
    let mut scratch = Scratch::default();
    let mut clock = Clock {
        deadline: None,
        ticks: 0,
    };
    let mut total = 0;
    loop {
        let removed = edge_pass(g, k, lb, use_club, None, stats, &mut scratch, &mut clock);
        if removed == 0 {
            return total;
        }
        total += removed;
    }
}

#[allow(clippy::too_many_arguments)]
fn edge_pass(
    g: &mut Graph,
    k: usize,
    lb: usize,
    use_club: bool,
    club_budget: Option<usize>,
    stats: &mut ReductionStats,
    scratch: &mut Scratch,
    clock: &mut Clock,
) -> usize {
    let mut queue: VecDeque<(Vertex, Vertex)> = g.edges().into();
    let mut queued: HashSet<(Vertex, Vertex)> = queue.iter().copied().collect();
    let mut budget = club_budget.unwrap_or(usize::MAX);
    let mut removed = 0;
    while let Some((u, v)) = queue.pop_front() {
        queued.remove(&(u, v));
        if !g.adjacent(u, v) {
            continue;
        }
        if clock.expired() {
            stats.timed_out = true;
            break;
        }
        let fired = if rule2_fires(g, k, lb, u, v) {
            stats.edges_rule2 += 1;
            true
        } else if use_club && budget > 0 {
            budget -= 1;
            if rule4_fires(g, k, lb, u, v, scratch) {
                stats.edges_rule4 += 1;
                true
            } else {
                false
            }
        } else {
            false
        };
        if fired {
            g.remove_edge(u, v);
            removed += 1;
            for end in [u, v] {
                let touching: Vec<Vertex> = g.neighbors(end).collect();
                for w in touching {
                    let e = key(end, w);
                    if queued.insert(e) {
                        queue.push_back(e);
                    }
                }
            }
        }
    }
    removed
}

/// Reduces `g` in place until no rule applies, or the deadline passes.
///
/// `lb` must be the size of some k-defective clique of `g`.
pub fn preprocess(g: &mut Graph, k: usize, lb: usize, config: &ReduceConfig) -> ReductionStats {
    let start = Instant::now();
    let mut stats = ReductionStats::default();
    let mut scratch = Scratch::default();
    let mut clock = Clock {
        deadline: config.deadline,
        ticks: 0,
    };
    let club = config.use_club;
    let budget = config.edge_club_budget;

    vertex_pass(g, k, lb, false, &mut stats, &mut scratch, &mut clock);
    if club && !stats.timed_out {
        vertex_pass(g, k, lb, true, &mut stats, &mut scratch, &mut clock);
    }
    if !stats.timed_out {
        edge_pass(g, k, lb, false, None, &mut stats, &mut scratch, &mut clock);
    }
    while !stats.timed_out {
        stats.passes += 1;
        let mut changed = vertex_pass(g, k, lb, club, &mut stats, &mut scratch, &mut clock);
        if stats.timed_out {
            break;
        }
        changed += edge_pass(g, k, lb, club, budget, &mut stats, &mut scratch, &mut clock);
        if changed == 0 {
            break;
        }
    }
    stats.elapsed = start.elapsed();
    stats
}
