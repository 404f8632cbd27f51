//! Conflict graphs.
//!
//! [`LayoutGraph`] is the feature-level conflict graph. [`Graph`] is the
//! general CE ∪ SE graph that simplification and the solvers operate on.

use std::collections::{HashMap, VecDeque};

use crate::geom::{gap_sq, Layout, Rect};
use crate::par;

/// Undirected graph with conflict and stitch edges.
///
/// Edges are stored canonically as `(lo, hi)`. Parallel edges are allowed only
/// through [`Graph::with_multi_edges`], where they act as integer weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    n: usize,
    conflict: Vec<(usize, usize)>,
    stitch: Vec<(usize, usize)>,
    conflict_adj: Vec<Vec<usize>>,
    stitch_adj: Vec<Vec<usize>>,
}

fn canon(edges: impl IntoIterator<Item = (usize, usize)>, n: usize) -> Vec<(usize, usize)> {
    edges
        .into_iter()
        .map(|(a, b)| {
            assert!(a != b, "self-loop on vertex {a}");
            assert!(a < n && b < n, "edge ({a},{b}) out of range for {n} vertices");
            (a.min(b), a.max(b))
        })
        .collect()
}

impl Graph {
    pub fn new(
        n: usize,
        conflict: impl IntoIterator<Item = (usize, usize)>,
        stitch: impl IntoIterator<Item = (usize, usize)>,
    ) -> Graph {
        let mut ce = canon(conflict, n);
        let mut se = canon(stitch, n);
        ce.sort_unstable();
        ce.dedup();
        se.sort_unstable();
        se.dedup();
        Graph::from_canonical(n, ce, se)
    }

    pub fn with_multi_edges(
        n: usize,
        conflict: impl IntoIterator<Item = (usize, usize)>,
        stitch: impl IntoIterator<Item = (usize, usize)>,
    ) -> Graph {
        let mut ce = canon(conflict, n);
        let mut se = canon(stitch, n);
        ce.sort_unstable();
        se.sort_unstable();
        Graph::from_canonical(n, ce, se)
    }

    fn from_canonical(n: usize, conflict: Vec<(usize, usize)>, stitch: Vec<(usize, usize)>) -> Graph {
        let mut conflict_adj = vec![Vec::new(); n];
        let mut stitch_adj = vec![Vec::new(); n];
        for &(a, b) in &conflict {
            conflict_adj[a].push(b);
            conflict_adj[b].push(a);
        }
        for &(a, b) in &stitch {
            stitch_adj[a].push(b);
            stitch_adj[b].push(a);
        }
        for v in conflict_adj.iter_mut().chain(stitch_adj.iter_mut()) {
            v.sort_unstable();
        }
        Graph {
            n,
            conflict,
            stitch,
            conflict_adj,
            stitch_adj,
        }
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, [], [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn conflict_edges(&self) -> &[(usize, usize)] {
        &self.conflict
    }

    pub fn stitch_edges(&self) -> &[(usize, usize)] {
        &self.stitch
    }

    pub fn conflict_neighbors(&self, v: usize) -> &[usize] {
        &self.conflict_adj[v]
    }

    pub fn stitch_neighbors(&self, v: usize) -> &[usize] {
        &self.stitch_adj[v]
    }

    /// Degree over CE ∪ SE, counting parallel edges.
    pub fn degree(&self, v: usize) -> usize {
        self.conflict_adj[v].len() + self.stitch_adj[v].len()
    }

    /// All neighbors over CE ∪ SE, sorted, without repeats.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.conflict_adj[v].iter().chain(&self.stitch_adj[v]).copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Subgraph induced by `vertices`; local vertex `i` is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            local.insert(v, i);
        }
        let pick = |edges: &[(usize, usize)]| -> Vec<(usize, usize)> {
            edges
                .iter()
                .filter_map(|&(a, b)| Some((*local.get(&a)?, *local.get(&b)?)))
                .collect()
        };
        Graph::with_multi_edges(vertices.len(), pick(&self.conflict), pick(&self.stitch))
    }

    /// Connected components over CE ∪ SE, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut comp = Vec::new();
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in self.conflict_adj[v].iter().chain(&self.stitch_adj[v]) {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Breadth-first vertex order rooted at the highest-degree vertex (lowest id
    /// on ties); unreached vertices restart the search the same way.
    pub fn bfs_order_from_max_degree(&self) -> Vec<usize> {
        let mut by_degree: Vec<usize> = (0..self.n).collect();
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        let mut seen = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut queue = VecDeque::new();
        for &root in &by_degree {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
        }
        order
    }
}

/// Feature-level conflict graph: vertex `i` is feature `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutGraph {
    pub n: usize,
    /// Sorted, canonical `(lo, hi)` pairs.
    pub conflict_edges: Vec<(usize, usize)>,
    pub adjacency: Vec<Vec<usize>>,
}

impl LayoutGraph {
    pub fn from_edges(n: usize, mut edges: Vec<(usize, usize)>) -> LayoutGraph {
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for a in adjacency.iter_mut() {
            a.sort_unstable();
        }
        LayoutGraph {
            n,
            conflict_edges: edges,
            adjacency,
        }
    }

    pub fn to_graph(&self) -> Graph {
        Graph::new(self.n, self.conflict_edges.iter().copied(), [])
    }
}

/// Builds the conflict graph of `layout`.
///
/// Two features conflict iff they share a layer and some pair of their
/// rectangles has a gap strictly below the minimum coloring distance.
pub fn build_layout_graph(layout: &Layout, threads: usize) -> LayoutGraph {
    let mut rects = Vec::new();
    let mut owner = Vec::new();
    for (id, r) in layout.all_rects() {
        rects.push(*r);
        owner.push(id);
    }
    let edges = near_pairs(&rects, &owner, layout.min_color_dist_nm, threads, |a, b| a == b);
    LayoutGraph::from_edges(layout.len(), edges)
}

/// Owner pairs `(lo, hi)` whose rectangles lie on one layer at gap below `dist`.
///
/// Uses a uniform grid with cell size `dist`; only rectangles sharing a cell of
/// the querying rectangle's `dist`-expanded box are compared. Output is sorted
/// and deduplicated, so it does not depend on `threads`.
pub(crate) fn near_pairs(
    rects: &[Rect],
    owner: &[usize],
    dist: i64,
    threads: usize,
    skip: impl Fn(usize, usize) -> bool + Sync,
) -> Vec<(usize, usize)> {
    assert!(dist > 0);
    let limit = (dist as u128) * (dist as u128);
    let cell = |v: i64| v.div_euclid(dist);
    let mut grid: HashMap<(i32, i64, i64), Vec<u32>> = HashMap::new();
    for (i, r) in rects.iter().enumerate() {
        for cx in cell(r.x_lo as i64)..=cell(r.x_hi as i64) {
            for cy in cell(r.y_lo as i64)..=cell(r.y_hi as i64) {
                grid.entry((r.layer, cx, cy)).or_default().push(i as u32);
            }
        }
    }
    let per_rect = par::map_range(rects.len(), threads, |i| {
        let r = &rects[i];
        let mut found = Vec::new();
        for cx in cell(r.x_lo as i64 - dist)..=cell(r.x_hi as i64 + dist) {
            for cy in cell(r.y_lo as i64 - dist)..=cell(r.y_hi as i64 + dist) {
                let Some(bucket) = grid.get(&(r.layer, cx, cy)) else { continue };
                for &j in bucket {
                    let j = j as usize;
                    if j <= i {
                        continue;
                    }
                    let (a, b) = (owner[i], owner[j]);
                    if skip(a, b) {
                        continue;
                    }
                    if gap_sq(r, &rects[j]) < limit {
                        found.push((a.min(b), a.max(b)));
                    }
                }
            }
        }
        found.sort_unstable();
        found.dedup();
        found
    });
    let mut edges: Vec<(usize, usize)> = per_rect.into_iter().flatten().collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Feature, Rect};

    fn layout(rects: &[(i64, i64, i64, i64)], d: i64) -> Layout {
        let features = rects
            .iter()
            .enumerate()
            .map(|(id, &(a, b, c, e))| Feature {
                id,
                layer: 1,
                rects: vec![Rect::new(a, b, c, e, 1).unwrap()],
            })
            .collect();
        Layout::new(features, 1, d).unwrap()
    }

    #[test]
    fn strict_inequality_at_coloring_distance() {
        let g = build_layout_graph(&layout(&[(0, 0, 40, 100), (159, 0, 200, 100)], 120), 1);
        assert_eq!(g.conflict_edges, vec![(0, 1)]);
        let g = build_layout_graph(&layout(&[(0, 0, 40, 100), (160, 0, 200, 100)], 120), 1);
        assert!(g.conflict_edges.is_empty());
    }

    #[test]
    fn layers_are_independent() {
        let mut l = layout(&[(0, 0, 40, 100), (60, 0, 100, 100)], 120);
        l.features[1].layer = 2;
        l.features[1].rects[0].layer = 2;
        assert!(build_layout_graph(&l, 1).conflict_edges.is_empty());
    }

    #[test]
    fn negative_coordinates_and_cell_boundaries() {
        let l = layout(&[(-130, -10, -121, 10), (-1, -10, 0, 10), (119, 0, 130, 1)], 120);
        // gaps: 0-1 = 120 (no), 1-2 = 119 (yes), 0-2 = 240 (no)
        assert_eq!(build_layout_graph(&l, 1).conflict_edges, vec![(1, 2)]);
    }

    #[test]
    fn graph_helpers() {
        let g = Graph::new(5, [(1, 0), (0, 1), (2, 1)], [(3, 4)]);
        assert_eq!(g.conflict_edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(g.bfs_order_from_max_degree(), vec![1, 0, 2, 3, 4]);
        let sub = g.induced(&[2, 1]);
        assert_eq!(sub.conflict_edges(), &[(0, 1)]);
        assert_eq!(Graph::with_multi_edges(2, [(0, 1), (1, 0)], []).degree(0), 2);
    }
}
