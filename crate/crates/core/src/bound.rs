//! Upper bounds on the size of a k-defective clique extending a partial
//! solution `S` with vertices from a candidate set `C`.
//!
//! The coloring-based bound groups candidates by how many vertices of `S`
//! they miss, colors each group greedily, and charges every candidate the
//! cheapest number of new missing edges it can cause when candidates are
//! added one color-round at a time. The degree-based bounds treat `C` as a
//! clique and only charge missing edges towards `S`.

use std::cmp::Reverse;

use crate::bitset::BitSet;
use crate::graph::{Graph, Representation, Vertex};

/// Minimum number of missing edges among `added` vertices drawn from
/// `colors` independent sets: spread the vertices as evenly as possible and
/// count the pairs that share a set.
///
/// Panics if `colors == 0`.
pub fn staircase_increment(colors: usize, added: usize) -> usize {
    assert!(colors > 0, "at least one independent set is required");
    let d = added / colors;
    let c = added - colors * d;
    c * d * (d + 1) / 2 + (colors - c) * d * d.saturating_sub(1) / 2
}

/// Candidates grouped by deficiency, i.e. by the number of vertices of `S`
/// they are not adjacent to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyPartition {
    /// `classes[i]` holds the candidates missing exactly `i` vertices of `S`.
    pub classes: Vec<Vec<Vertex>>,
    /// Candidates missing more than `k` vertices of `S`.
    pub dropped: Vec<Vertex>,
    /// Greedy color count per class; zero until [`DeficiencyPartition::color`]
    /// runs, and zero for empty classes.
    pub color_counts: Vec<usize>,
}

impl DeficiencyPartition {
    pub fn color(&mut self, g: &Graph) {
        for (i, class) in self.classes.iter().enumerate() {
            self.color_counts[i] = if class.is_empty() {
                0
            } else {
                greedy_color(g, class).color_count
            };
        }
    }
}

pub fn partition_by_deficiency(
    g: &Graph,
    s: &[Vertex],
    c: &[Vertex],
    k: usize,
) -> DeficiencyPartition {
    let s_set = BitSet::from_iter(g.order(), s.iter().copied());
    let mut classes = vec![Vec::new(); k + 1];
    let mut dropped = Vec::new();
    for &v in c {
        debug_assert!(!s_set.contains(v));
        let deficiency = s.len() - g.count_neighbors_in(v, &s_set);
        match classes.get_mut(deficiency) {
            Some(class) => class.push(v),
            None => dropped.push(v),
        }
    }
    DeficiencyPartition {
        classes,
        dropped,
        color_counts: vec![0; k + 1],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub color_count: usize,
    /// Independent sets, indexed by color.
    pub classes: Vec<Vec<Vertex>>,
}

/// Sequential greedy coloring of `G[vertices]`. Vertices are visited by
/// non-increasing degree inside the set, ties by ascending id, and each takes
/// the smallest color not used by an earlier neighbor.
pub fn greedy_color(g: &Graph, vertices: &[Vertex]) -> Coloring {
    let mut scratch = ColorBound::new();
    let colors = scratch.color(g, vertices, None);
    debug_assert_eq!(colors, scratch.color_count);
    let mut classes = vec![Vec::new(); colors];
    for &v in vertices {
        classes[scratch.color_of(v)].push(v);
    }
    classes.iter_mut().for_each(|c| c.sort_unstable());
    if cfg!(debug_assertions) {
        for class in &classes {
            for (i, &a) in class.iter().enumerate() {
                for &b in &class[i + 1..] {
                    assert!(!g.adjacent(a, b), "greedy coloring put {a} and {b} together");
                }
            }
        }
    }
    scratch.reset_colors(vertices);
    Coloring {
        color_count: colors,
        classes,
    }
}

/// Cost buckets: `counts[l]` candidates each cause at least `l` more missing
/// edges when candidates are added in bucket order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostBuckets {
    pub counts: Vec<usize>,
    /// Bucket members, filled in only by [`extract_traced`].
    pub members: Option<Vec<Vec<Vertex>>>,
}

impl CostBuckets {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Number of candidates the budget `kappa` can pay for when taking the
    /// cheapest buckets first.
    pub fn affordable(&self, mut kappa: usize) -> usize {
        let mut taken = self.counts[0];
        for (cost, &count) in self.counts.iter().enumerate().skip(1) {
            if cost * count <= kappa {
                taken += count;
                kappa -= cost * count;
            } else {
                taken += kappa / cost;
                break;
            }
        }
        taken
    }
}

/// Moves chunks of `colors` vertices of class `class_index` into successive
/// buckets, starting at bucket `class_index`, and drops whatever would land
/// beyond bucket `k`.
fn chunk_counts(counts: &mut [usize], class_index: usize, size: usize, colors: usize) {
    let k = counts.len() - 1;
    let mut left = size;
    let mut bucket = class_index;
    while left >= colors && bucket <= k {
        counts[bucket] += colors;
        left -= colors;
        bucket += 1;
    }
    if bucket <= k {
        counts[bucket] += left;
    }
}

pub fn extract(g: &Graph, k: usize, s: &[Vertex], c: &[Vertex]) -> CostBuckets {
    let mut part = partition_by_deficiency(g, s, c, k);
    part.color(g);
    let mut counts = vec![0; k + 1];
    for (i, class) in part.classes.iter().enumerate() {
        if !class.is_empty() {
            chunk_counts(&mut counts, i, class.len(), part.color_counts[i]);
        }
    }
    CostBuckets {
        counts,
        members: None,
    }
}

/// [`extract`] that also records which vertices land in each bucket. Chunks
/// are cut from the class in ascending id order.
pub fn extract_traced(g: &Graph, k: usize, s: &[Vertex], c: &[Vertex]) -> CostBuckets {
    let mut part = partition_by_deficiency(g, s, c, k);
    part.color(g);
    let mut members = vec![Vec::new(); k + 1];
    for (i, class) in part.classes.iter_mut().enumerate() {
        if class.is_empty() {
            continue;
        }
        class.sort_unstable();
        let r = part.color_counts[i];
        let mut rest: &[Vertex] = class;
        let mut bucket = i;
        while rest.len() >= r && bucket <= k {
            members[bucket].extend_from_slice(&rest[..r]);
            rest = &rest[r..];
            bucket += 1;
        }
        if bucket <= k {
            members[bucket].extend_from_slice(rest);
        }
    }
    CostBuckets {
        counts: members.iter().map(Vec::len).collect(),
        members: Some(members),
    }
}

/// Coloring-based upper bound on the largest k-defective clique `W` with
/// `S ⊆ W ⊆ S ∪ C`.
///
/// Panics if `S` is not a k-defective clique.
pub fn club(g: &Graph, k: usize, s: &[Vertex], c: &[Vertex]) -> usize {
    let missing = g.missing_edges(s);
    assert!(missing <= k, "partial solution misses {missing} > {k} edges");
    let part = partition_by_deficiency(g, s, c, k);
    ColorBound::new().bound(g, k, s.len(), k - missing, &part.classes, BoundKind::Coloring)
}

/// Degree-based bound `|S ∪ {v}| + |N_C(v)| + min(rem, |C \ N[v]|)` with
/// `C` the active vertices outside `S`. When `S ∪ {v}` already misses more
/// than `k` edges the value is `|S| + 1`.
pub fn kdbb_vertex_bound(g: &Graph, k: usize, s: &[Vertex], v: Vertex) -> usize {
    let s_set = BitSet::from_iter(g.order(), s.iter().copied());
    debug_assert!(!s_set.contains(v));
    let mut with_v = s.to_vec();
    with_v.push(v);
    let missing = g.missing_edges(&with_v);
    if missing > k {
        return s.len() + 1;
    }
    let rem = k - missing;
    let candidates = g.vertex_count() - s.len();
    let inside = g.degree(v) - g.count_neighbors_in(v, &s_set);
    let outside = candidates - 1 - inside;
    s.len() + 1 + inside + rem.min(outside)
}

/// Degree-based bound for the pair `{u, v}`:
/// `|S ∪ {u,v}| + |N_C(u) ∩ N_C(v)| + min(rem, |C \ N[u,v]|)`. When
/// `S ∪ {u, v}` already misses more than `k` edges the value is `|S| + 1`.
pub fn kdbb_edge_bound(g: &Graph, k: usize, s: &[Vertex], u: Vertex, v: Vertex) -> usize {
    debug_assert!(u != v);
    let s_set = BitSet::from_iter(g.order(), s.iter().copied());
    let mut with_pair = s.to_vec();
    with_pair.extend([u, v]);
    let missing = g.missing_edges(&with_pair);
    if missing > k {
        return s.len() + 1;
    }
    let rem = k - missing;
    let candidates = g.vertex_count() - s.len();
    let common = g
        .common_neighbors(u, v)
        .into_iter()
        .filter(|&w| !s_set.contains(w))
        .count();
    let outside = candidates - 2 - common;
    s.len() + 2 + common + rem.min(outside)
}

/// How each deficiency class is split into independent sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Greedy coloring inside each class.
    Coloring,
    /// One set per vertex, i.e. the class is treated as a clique.
    Clique,
}

/// Reusable scratch space for evaluating the bound many times.
#[derive(Debug, Default)]
pub struct ColorBound {
    color_sets: Vec<BitSet>,
    color_count: usize,
    colors: Vec<u32>,
    used: Vec<bool>,
    class_set: BitSet,
    order: Vec<(Reverse<usize>, Vertex)>,
    counts: Vec<usize>,
}

const UNCOLORED: u32 = u32::MAX;

impl ColorBound {
    pub fn new() -> Self {
        Self::default()
    }

    fn ensure_capacity(&mut self, order: usize) {
        if self.class_set.capacity() != order {
            self.class_set = BitSet::new(order);
            self.color_sets.clear();
            self.colors = vec![UNCOLORED; order];
        }
    }

    fn color_of(&self, v: Vertex) -> usize {
        self.colors[v] as usize
    }

    fn reset_colors(&mut self, vertices: &[Vertex]) {
        for &v in vertices {
            self.colors[v] = UNCOLORED;
        }
    }

    /// Greedily colors `vertices`, stopping early once `stop_at` colors are in
    /// use. Returns the number of colors used. Colors stay recorded in
    /// `self.colors` until [`ColorBound::reset_colors`].
    fn color(&mut self, g: &Graph, vertices: &[Vertex], stop_at: Option<usize>) -> usize {
        self.ensure_capacity(g.order());
        for &v in vertices {
            self.class_set.insert(v);
        }
        self.order.clear();
        for &v in vertices {
            let d = g.count_neighbors_in(v, &self.class_set);
            self.order.push((Reverse(d), v));
        }
        self.order.sort_unstable();

        let dense = g.representation() == Representation::Dense;
        self.color_count = 0;
        for idx in 0..self.order.len() {
            let v = self.order[idx].1;
            let c = if dense {
                (0..self.color_count)
                    .find(|&c| !g.has_neighbor_in(v, &self.color_sets[c]))
                    .unwrap_or(self.color_count)
            } else {
                self.used.clear();
                self.used.resize(self.color_count + 1, false);
                for w in g.neighbors_in(v, &self.class_set) {
                    let cw = self.colors[w];
                    if cw != UNCOLORED {
                        self.used[cw as usize] = true;
                    }
                }
                self.used.iter().position(|&u| !u).unwrap()
            };
            if c == self.color_count {
                self.color_count += 1;
                if dense {
                    if self.color_sets.len() < self.color_count {
                        self.color_sets.push(BitSet::new(g.order()));
                    } else {
                        self.color_sets[c].clear();
                    }
                }
            }
            if dense {
                self.color_sets[c].insert(v);
            }
            self.colors[v] = c as u32;
            if stop_at.is_some_and(|limit| self.color_count >= limit) {
                break;
            }
        }
        // Cleared member by member so sparse graphs with many vertices do
        // not pay for the whole bitset on every call.
        for &v in vertices {
            self.class_set.remove(v);
        }
        self.color_count
    }

    /// Evaluates the bound for a partial solution of size `s_len` whose
    /// remaining missing-edge budget is `kappa`. `classes[i]` lists the
    /// candidates missing exactly `i` vertices of the partial solution;
    /// candidates missing more than `k` must be left out.
    pub fn bound(
        &mut self,
        g: &Graph,
        k: usize,
        s_len: usize,
        kappa: usize,
        classes: &[Vec<Vertex>],
        kind: BoundKind,
    ) -> usize {
        self.bound_lumped(g, k, s_len, kappa, classes, kind, &[])
    }

    /// [`ColorBound::bound`] plus `lumped`: pairs `(i, count)` of candidates
    /// that miss exactly `i` vertices of the partial solution but are not
    /// listed. Each is charged the cheapest possible cost `i`, which can only
    /// raise the bound.
    #[allow(clippy::too_many_arguments)]
    pub fn bound_lumped(
        &mut self,
        g: &Graph,
        k: usize,
        s_len: usize,
        kappa: usize,
        classes: &[Vec<Vertex>],
        kind: BoundKind,
        lumped: &[(usize, usize)],
    ) -> usize {
        self.counts.clear();
        self.counts.resize(k + 1, 0);
        for &(i, count) in lumped {
            if i <= k {
                self.counts[i] += count;
            }
        }
        for (i, class) in classes.iter().enumerate().take(k + 1) {
            if class.is_empty() {
                continue;
            }
            if kind == BoundKind::Clique {
                self.counts[i] += class.len();
                continue;
            }
            // Once the first chunk of this class alone can absorb every
            // affordable vertex at cost `i`, the rest of the class cannot
            // change the result.
            if let Some(affordable) = kappa.checked_div(i) {
                if affordable == 0 {
                    self.counts[i] += class.len();
                    continue;
                }
                let colors = self.color(g, class, Some(affordable));
                self.reset_colors(class);
                if colors >= affordable {
                    self.counts[i] += class.len();
                    continue;
                }
                chunk_counts(&mut self.counts, i, class.len(), colors);
            } else {
                let colors = self.color(g, class, None);
                self.reset_colors(class);
                chunk_counts(&mut self.counts, 0, class.len(), colors);
            }
        }
        let buckets = CostBuckets {
            counts: std::mem::take(&mut self.counts),
            members: None,
        };
        let value = s_len + buckets.affordable(kappa);
        self.counts = buckets.counts;
        value
    }
}
