//! Undirected simple graph with logical, journaled deletion.
//!
//! Vertices keep their ids for the lifetime of a graph. Deleting a vertex or
//! an edge only flips state and appends to the journal, so any prefix of the
//! mutation history can be undone in `O(changes)` with [`Graph::rollback`].
//!
//! Two adjacency layouts are supported. Dense graphs keep one bit row per
//! vertex; sparse graphs keep sorted neighbor arrays plus a set of deleted
//! edges. The layout is picked from the density at construction time.

use std::collections::HashSet;

use thiserror::Error;

use crate::bitset::{AndOnes, BitSet};

pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex id {vertex} out of range for a graph with {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
}

/// Selects between the bit-matrix and adjacency-list layouts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphOptions {
    /// Minimum density for the bit-matrix layout.
    pub density_threshold: f64,
    /// Upper limit on the vertex count of the bit-matrix layout.
    pub max_dense_vertices: usize,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            density_threshold: 0.05,
            max_dense_vertices: 50_000,
        }
    }
}

impl GraphOptions {
    pub fn always_dense() -> Self {
        GraphOptions {
            density_threshold: 0.0,
            max_dense_vertices: usize::MAX,
        }
    }

    pub fn always_sparse() -> Self {
        GraphOptions {
            density_threshold: f64::INFINITY,
            max_dense_vertices: 0,
        }
    }

    fn wants_dense(&self, n: usize, m: usize) -> bool {
        if n > self.max_dense_vertices {
            return false;
        }
        if n < 2 {
            return self.density_threshold <= 1.0;
        }
        density(n, m) >= self.density_threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Dense,
    Sparse,
}

/// Journal position returned by [`Graph::checkpoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Checkpoint(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mutation {
    Vertex(u32),
    Edge(u32, u32),
}

#[derive(Clone, Debug)]
enum Adjacency {
    Dense(Vec<BitSet>),
    Sparse {
        lists: Vec<Vec<u32>>,
        removed: HashSet<u64>,
    },
}

#[inline]
fn edge_key(u: usize, v: usize) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

/// Density `2|E| / (|V|(|V|-1))`; zero for fewer than two vertices.
pub fn density(n: usize, m: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    }
}

#[derive(Clone, Debug)]
pub struct Graph {
    order: usize,
    active: BitSet,
    active_count: usize,
    degree: Vec<usize>,
    edge_count: usize,
    adj: Adjacency,
    journal: Vec<Mutation>,
}

/// Canonical view used to compare graph states structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub vertices: Vec<Vertex>,
    pub degrees: Vec<usize>,
    pub edges: Vec<(Vertex, Vertex)>,
    pub edge_count: usize,
}

impl Graph {
    /// Builds a graph on vertices `0..n`. Self-loops and duplicate pairs in
    /// `edges` are dropped.
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Graph, GraphError> {
        Graph::with_options(n, edges, GraphOptions::default())
    }

    pub fn with_options(
        n: usize,
        edges: &[(Vertex, Vertex)],
        options: GraphOptions,
    ) -> Result<Graph, GraphError> {
        assert!(n <= u32::MAX as usize, "vertex ids must fit in 32 bits");
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange {
                        vertex: x,
                        order: n,
                    });
                }
            }
            if u != v {
                lists[u].push(v as u32);
                lists[v].push(u as u32);
            }
        }
        let mut twice_m = 0;
        for list in lists.iter_mut() {
            list.sort_unstable();
            list.dedup();
            twice_m += list.len();
        }
        let m = twice_m / 2;
        let degree = lists.iter().map(Vec::len).collect();
        let adj = if options.wants_dense(n, m) {
            let rows = lists
                .iter()
                .map(|l| BitSet::from_iter(n, l.iter().map(|&x| x as usize)))
                .collect();
            Adjacency::Dense(rows)
        } else {
            Adjacency::Sparse {
                lists,
                removed: HashSet::new(),
            }
        };
        Ok(Graph {
            order: n,
            active: BitSet::full(n),
            active_count: n,
            degree,
            edge_count: m,
            adj,
            journal: Vec::new(),
        })
    }

    /// Size of the vertex id universe, including deleted vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of active vertices.
    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.active_count
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn density(&self) -> f64 {
        density(self.active_count, self.edge_count)
    }

    pub fn representation(&self) -> Representation {
        match self.adj {
            Adjacency::Dense(_) => Representation::Dense,
            Adjacency::Sparse { .. } => Representation::Sparse,
        }
    }

    #[inline]
    pub fn is_active(&self, v: Vertex) -> bool {
        v < self.order && self.active.contains(v)
    }

    #[inline]
    pub fn active(&self) -> &BitSet {
        &self.active
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.active.iter()
    }

    /// Degree of an active vertex.
    #[inline]
    pub fn degree(&self, v: Vertex) -> usize {
        debug_assert!(self.is_active(v));
        self.degree[v]
    }

    #[inline]
    fn has_raw_edge(&self, u: Vertex, v: Vertex) -> bool {
        match &self.adj {
            Adjacency::Dense(rows) => rows[u].contains(v),
            Adjacency::Sparse { lists, removed } => {
                lists[u].binary_search(&(v as u32)).is_ok()
                    && (removed.is_empty() || !removed.contains(&edge_key(u, v)))
            }
        }
    }

    /// True when `u` and `v` are distinct active vertices joined by a live edge.
    #[inline]
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        u != v && self.is_active(u) && self.is_active(v) && self.has_raw_edge(u, v)
    }

    pub fn neighbors(&self, v: Vertex) -> Neighbors<'_> {
        debug_assert!(self.is_active(v));
        match &self.adj {
            Adjacency::Dense(rows) => Neighbors::Dense(rows[v].iter_and(&self.active)),
            Adjacency::Sparse { lists, removed } => Neighbors::Sparse {
                list: lists[v].iter(),
                owner: v,
                active: &self.active,
                removed,
            },
        }
    }

    /// Neighbors of `v` that belong to `set`, where `set` holds active
    /// vertices only.
    pub fn neighbors_in<'a>(&'a self, v: Vertex, set: &'a BitSet) -> NeighborsIn<'a> {
        match &self.adj {
            Adjacency::Dense(rows) => NeighborsIn::Dense(rows[v].iter_and(set)),
            Adjacency::Sparse { .. } => NeighborsIn::Sparse(self.neighbors(v), set),
        }
    }

    /// `|N(v) ∩ set|`, where `set` holds active vertices only.
    #[inline]
    pub fn count_neighbors_in(&self, v: Vertex, set: &BitSet) -> usize {
        match &self.adj {
            Adjacency::Dense(rows) => rows[v].intersection_len(set),
            Adjacency::Sparse { .. } => self.neighbors(v).filter(|&w| set.contains(w)).count(),
        }
    }

    /// Whether `v` has a neighbor in `set`, where `set` holds active vertices only.
    #[inline]
    pub fn has_neighbor_in(&self, v: Vertex, set: &BitSet) -> bool {
        match &self.adj {
            Adjacency::Dense(rows) => rows[v].intersects(set),
            Adjacency::Sparse { .. } => self.neighbors(v).any(|w| set.contains(w)),
        }
    }

    /// `N(u) ∩ N(v)` over the live graph, sorted ascending.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        debug_assert!(u != v && self.is_active(u) && self.is_active(v));
        match &self.adj {
            Adjacency::Dense(rows) => {
                let mut both = rows[u].clone();
                both.intersect_with(&rows[v]);
                both.intersect_with(&self.active);
                both.iter().collect()
            }
            Adjacency::Sparse { .. } => {
                let (a, b) = if self.degree[u] <= self.degree[v] {
                    (u, v)
                } else {
                    (v, u)
                };
                self.neighbors(a)
                    .filter(|&w| w != b && self.has_raw_edge(b, w))
                    .collect()
            }
        }
    }

    pub fn common_neighbor_count(&self, u: Vertex, v: Vertex) -> usize {
        match &self.adj {
            Adjacency::Dense(rows) => rows[u]
                .words()
                .iter()
                .zip(rows[v].words())
                .zip(self.active.words())
                .map(|((a, b), c)| (a & b & c).count_ones() as usize)
                .sum(),
            Adjacency::Sparse { .. } => self.common_neighbors(u, v).len(),
        }
    }

    /// Number of vertex pairs inside `s` that are not joined by an edge.
    ///
    /// Panics if `s` names an inactive vertex.
    pub fn missing_edges(&self, s: &[Vertex]) -> usize {
        for &v in s {
            assert!(self.is_active(v), "vertex {v} is not active");
        }
        let members = BitSet::from_iter(self.order, s.iter().copied());
        let size = members.len();
        let inside: usize = members
            .iter()
            .map(|v| self.count_neighbors_in(v, &members))
            .sum::<usize>()
            / 2;
        size * size.saturating_sub(1) / 2 - inside
    }

    /// All live edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in self.vertices() {
            for w in self.neighbors(u) {
                if u < w {
                    out.push((u, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint(self.journal.len())
    }

    pub fn journal_len(&self) -> usize {
        self.journal.len()
    }

    /// Panics if `v` is not active.
    pub fn remove_vertex(&mut self, v: Vertex) {
        assert!(self.is_active(v), "vertex {v} removed twice or out of range");
        let nbrs: Vec<Vertex> = self.neighbors(v).collect();
        for w in nbrs {
            self.degree[w] -= 1;
        }
        self.edge_count -= self.degree[v];
        self.active.remove(v);
        self.active_count -= 1;
        self.journal.push(Mutation::Vertex(v as u32));
    }

    /// Panics if `(u, v)` is not a live edge.
    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) {
        assert!(self.adjacent(u, v), "edge ({u}, {v}) is not live");
        match &mut self.adj {
            Adjacency::Dense(rows) => {
                rows[u].remove(v);
                rows[v].remove(u);
            }
            Adjacency::Sparse { removed, .. } => {
                removed.insert(edge_key(u, v));
            }
        }
        self.degree[u] -= 1;
        self.degree[v] -= 1;
        self.edge_count -= 1;
        self.journal.push(Mutation::Edge(u as u32, v as u32));
    }

    /// Undoes every mutation recorded after `checkpoint`.
    pub fn rollback(&mut self, checkpoint: Checkpoint) {
        assert!(checkpoint.0 <= self.journal.len(), "stale checkpoint");
        while self.journal.len() > checkpoint.0 {
            match self.journal.pop().unwrap() {
                Mutation::Vertex(v) => {
                    let v = v as usize;
                    self.active.insert(v);
                    self.active_count += 1;
                    let nbrs: Vec<Vertex> = self.neighbors(v).collect();
                    for w in nbrs {
                        self.degree[w] += 1;
                    }
                    self.edge_count += self.degree[v];
                }
                Mutation::Edge(u, v) => {
                    let (u, v) = (u as usize, v as usize);
                    match &mut self.adj {
                        Adjacency::Dense(rows) => {
                            rows[u].insert(v);
                            rows[v].insert(u);
                        }
                        Adjacency::Sparse { removed, .. } => {
                            removed.remove(&edge_key(u, v));
                        }
                    }
                    self.degree[u] += 1;
                    self.degree[v] += 1;
                    self.edge_count += 1;
                }
            }
        }
    }

    /// Drops the journal; earlier checkpoints become invalid.
    pub fn commit(&mut self) {
        self.journal.clear();
    }

    /// Copies the live part of the graph into a fresh graph with ids
    /// `0..vertex_count()`. Returns the graph and the map from new to old ids.
    pub fn compact(&self, options: GraphOptions) -> (Graph, Vec<Vertex>) {
        let old_ids: Vec<Vertex> = self.vertices().collect();
        let mut new_id = vec![usize::MAX; self.order];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let edges: Vec<(Vertex, Vertex)> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (new_id[u], new_id[v]))
            .collect();
        let g = Graph::with_options(old_ids.len(), &edges, options)
            .expect("compacted ids are in range");
        (g, old_ids)
    }

    pub fn snapshot(&self) -> Snapshot {
        let vertices: Vec<Vertex> = self.vertices().collect();
        let degrees = vertices.iter().map(|&v| self.degree[v]).collect();
        Snapshot {
            vertices,
            degrees,
            edges: self.edges(),
            edge_count: self.edge_count,
        }
    }
}

pub enum Neighbors<'a> {
    Dense(AndOnes<'a>),
    Sparse {
        list: std::slice::Iter<'a, u32>,
        owner: Vertex,
        active: &'a BitSet,
        removed: &'a HashSet<u64>,
    },
}

impl Iterator for Neighbors<'_> {
    type Item = Vertex;

    #[inline]
    fn next(&mut self) -> Option<Vertex> {
        match self {
            Neighbors::Dense(it) => it.next(),
            Neighbors::Sparse {
                list,
                owner,
                active,
                removed,
            } => {
                for &w in list.by_ref() {
                    let w = w as usize;
                    if active.contains(w)
                        && (removed.is_empty() || !removed.contains(&edge_key(*owner, w)))
                    {
                        return Some(w);
                    }
                }
                None
            }
        }
    }
}

pub enum NeighborsIn<'a> {
    Dense(AndOnes<'a>),
    Sparse(Neighbors<'a>, &'a BitSet),
}

impl Iterator for NeighborsIn<'_> {
    type Item = Vertex;

    #[inline]
    fn next(&mut self) -> Option<Vertex> {
        match self {
            NeighborsIn::Dense(it) => it.next(),
            NeighborsIn::Sparse(it, set) => it.find(|&w| set.contains(w)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both_layouts(n: usize, edges: &[(usize, usize)]) -> [Graph; 2] {
        [
            Graph::with_options(n, edges, GraphOptions::always_dense()).unwrap(),
            Graph::with_options(n, edges, GraphOptions::always_sparse()).unwrap(),
        ]
    }

    fn k(n: usize) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        e
    }

    #[test]
    fn build_drops_loops_and_duplicates() {
        for g in both_layouts(3, &[(0, 1), (1, 0), (1, 1)]) {
            assert_eq!(g.edge_count(), 1);
            assert!(g.adjacent(0, 1));
            assert!(!g.adjacent(1, 1));
            assert_eq!(g.degree(2), 0);
        }
    }

    #[test]
    fn build_rejects_out_of_range() {
        assert_eq!(
            Graph::new(2, &[(0, 2)]).unwrap_err(),
            GraphError::VertexOutOfRange {
                vertex: 2,
                order: 2
            }
        );
    }

    #[test]
    fn empty_graph() {
        let g = Graph::new(0, &[]).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.density(), 0.0);
    }

    #[test]
    fn layout_follows_density() {
        let dense = Graph::new(4, &k(4)).unwrap();
        assert_eq!(dense.representation(), Representation::Dense);
        let path: Vec<_> = (0..199).map(|i| (i, i + 1)).collect();
        let sparse = Graph::new(200, &path).unwrap();
        assert_eq!(sparse.representation(), Representation::Sparse);
    }

    #[test]
    fn missing_edges_counts_non_adjacent_pairs() {
        for g in both_layouts(4, &[(0, 1), (1, 2), (2, 3)]) {
            assert_eq!(g.missing_edges(&[2]), 0);
            assert_eq!(g.missing_edges(&[0, 1]), 0);
            assert_eq!(g.missing_edges(&[0, 2]), 1);
            assert_eq!(g.missing_edges(&[0, 1, 2, 3]), 3);
            assert_eq!(g.missing_edges(&[]), 0);
        }
    }

    #[test]
    #[should_panic]
    fn missing_edges_rejects_inactive() {
        let mut g = Graph::new(3, &k(3)).unwrap();
        g.remove_vertex(1);
        g.missing_edges(&[0, 1]);
    }

    #[test]
    fn common_neighbors_in_clique_and_isolated() {
        for g in both_layouts(5, &k(4)) {
            assert_eq!(g.common_neighbors(0, 1), vec![2, 3]);
            assert!(g.common_neighbors(4, 0).is_empty());
        }
    }

    #[test]
    fn remove_all_vertices_clears_edges() {
        for mut g in both_layouts(6, &k(6)) {
            for v in 0..6 {
                g.remove_vertex(v);
            }
            assert_eq!(g.edge_count(), 0);
            assert_eq!(g.vertex_count(), 0);
        }
    }

    #[test]
    fn remove_then_rollback_restores() {
        for mut g in both_layouts(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)]) {
            let before = g.snapshot();
            let cp = g.checkpoint();
            g.remove_vertex(1);
            assert!(!g.adjacent(0, 1));
            assert_eq!(g.degree(0), 1);
            g.remove_edge(3, 4);
            assert_eq!(g.edge_count(), 2);
            assert_eq!(g.neighbors(3).collect::<Vec<_>>(), vec![2]);
            g.rollback(cp);
            assert_eq!(g.snapshot(), before);
        }
    }

    #[test]
    #[should_panic]
    fn double_vertex_removal_panics() {
        let mut g = Graph::new(3, &k(3)).unwrap();
        g.remove_vertex(0);
        g.remove_vertex(0);
    }

    #[test]
    #[should_panic]
    fn removing_missing_edge_panics() {
        let mut g = Graph::new(3, &[(0, 1)]).unwrap();
        g.remove_edge(1, 2);
    }

    #[test]
    fn compact_remaps_ids() {
        let mut g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        g.remove_vertex(0);
        let (c, map) = g.compact(GraphOptions::default());
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(c.edges(), vec![(0, 1), (1, 2)]);
    }
}
