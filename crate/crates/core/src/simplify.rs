//! Graph simplification and color recovery.
//!
//! Every reduction pushes events onto a [`SimplifyHistory`]. After the
//! remaining parts are colored, [`recover`] replays the history backwards:
//! split parts are rotated into agreement on shared vertices, merged vertices
//! copy their partner's color, and hidden vertices pick a free color.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{Color, Solution};
use crate::graph::Graph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplifyError {
    #[error("sub-K4 merging needs exactly 3 colors, got {0}")]
    WrongK(usize),
    #[error("simplification level must be 0..=4, got {0}")]
    BadLevel(u8),
    #[error("inconsistent history: {0}")]
    InconsistentHistory(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimplifyEvent {
    /// Removed for having degree below k; neighbors as seen at removal time.
    HiddenVertex {
        v: usize,
        conflict_neighbors: Vec<usize>,
        stitch_neighbors: Vec<usize>,
    },
    /// `removed` must share `kept`'s color.
    MergedPair { kept: usize, removed: usize },
    /// Parts `first_part..first_part + parts.len()` of a split, in an order
    /// where each part after the first meets earlier ones in one shared vertex.
    ComponentSplit {
        first_part: usize,
        parts: Vec<Vec<usize>>,
        shared: Vec<usize>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyHistory {
    pub events: Vec<SimplifyEvent>,
}

/// Cumulative simplification levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimplifyLevel(u8);

impl SimplifyLevel {
    pub const NONE: SimplifyLevel = SimplifyLevel(0);
    pub const ICC: SimplifyLevel = SimplifyLevel(1);
    pub const HIDE_SMALL_DEGREE: SimplifyLevel = SimplifyLevel(2);
    pub const BICONNECTED: SimplifyLevel = SimplifyLevel(3);
    pub const MERGE_SUBK4: SimplifyLevel = SimplifyLevel(4);

    pub fn new(level: u8) -> Result<Self, SimplifyError> {
        if level > 4 {
            return Err(SimplifyError::BadLevel(level));
        }
        Ok(SimplifyLevel(level))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl Default for SimplifyLevel {
    fn default() -> Self {
        SimplifyLevel::BICONNECTED
    }
}

/// A piece of a larger graph; local vertex `i` is `vertices[i]` there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub graph: Graph,
}

impl Subgraph {
    pub fn of(graph: &Graph, vertices: Vec<usize>) -> Subgraph {
        let g = graph.induced(&vertices);
        Subgraph { vertices, graph: g }
    }
}

/// Mutable adjacency-set view used while reducing.
struct WorkGraph {
    alive: Vec<bool>,
    conflict: Vec<BTreeSet<usize>>,
    stitch: Vec<BTreeSet<usize>>,
}

impl WorkGraph {
    fn from_graph(g: &Graph) -> WorkGraph {
        let n = g.n();
        WorkGraph {
            alive: vec![true; n],
            conflict: (0..n).map(|v| g.conflict_neighbors(v).iter().copied().collect()).collect(),
            stitch: (0..n).map(|v| g.stitch_neighbors(v).iter().copied().collect()).collect(),
        }
    }

    fn degree(&self, v: usize) -> usize {
        self.conflict[v].len() + self.stitch[v].len()
    }

    fn remove(&mut self, v: usize) {
        self.alive[v] = false;
        for u in std::mem::take(&mut self.conflict[v]) {
            self.conflict[u].remove(&v);
        }
        for u in std::mem::take(&mut self.stitch[v]) {
            self.stitch[u].remove(&v);
        }
    }

    /// Folds `removed` into `kept`.
    fn merge(&mut self, kept: usize, removed: usize) {
        let ce = std::mem::take(&mut self.conflict[removed]);
        let se = std::mem::take(&mut self.stitch[removed]);
        self.alive[removed] = false;
        for u in ce {
            self.conflict[u].remove(&removed);
            if u != kept {
                self.conflict[u].insert(kept);
                self.conflict[kept].insert(u);
            }
        }
        for u in se {
            self.stitch[u].remove(&removed);
            if u != kept {
                self.stitch[u].insert(kept);
                self.stitch[kept].insert(u);
            }
        }
    }

    /// Surviving vertices as a subgraph (ids are this graph's vertex ids).
    fn to_subgraph(&self) -> Subgraph {
        let vertices: Vec<usize> = (0..self.alive.len()).filter(|&v| self.alive[v]).collect();
        let mut local = vec![usize::MAX; self.alive.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let local = &local;
        let edges = |adj: &Vec<BTreeSet<usize>>| -> Vec<(usize, usize)> {
            vertices
                .iter()
                .flat_map(|&v| adj[v].iter().filter(move |&&u| u > v).map(move |&u| (local[v], local[u])))
                .collect()
        };
        let graph = Graph::new(vertices.len(), edges(&self.conflict), edges(&self.stitch));
        Subgraph { vertices, graph }
    }
}

/// Connected components over CE ∪ SE, ordered by smallest vertex id.
pub fn simplify_icc(graph: &Graph) -> (Vec<Subgraph>, SimplifyHistory) {
    let comps = graph.components();
    let parts: Vec<Subgraph> = comps.iter().map(|c| Subgraph::of(graph, c.clone())).collect();
    let history = SimplifyHistory {
        events: vec![SimplifyEvent::ComponentSplit {
            first_part: 0,
            parts: comps,
            shared: Vec::new(),
        }],
    };
    (parts, history)
}

/// Iteratively hides vertices with CE + SE degree below `k`.
///
/// Each sweep visits vertices in ascending id order; sweeps repeat until a
/// sweep hides nothing.
pub fn simplify_hide_small_degree(graph: &Graph, k: usize) -> (Subgraph, SimplifyHistory) {
    let mut w = WorkGraph::from_graph(graph);
    let mut events = Vec::new();
    loop {
        let mut changed = false;
        for v in 0..graph.n() {
            if w.alive[v] && w.degree(v) < k {
                events.push(SimplifyEvent::HiddenVertex {
                    v,
                    conflict_neighbors: w.conflict[v].iter().copied().collect(),
                    stitch_neighbors: w.stitch[v].iter().copied().collect(),
                });
                w.remove(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (w.to_subgraph(), SimplifyHistory { events })
}

/// Splits at articulation vertices into biconnected blocks.
///
/// Blocks come out in breadth-first order over the block-cut tree, starting at
/// the block holding the smallest vertex, so each later block meets the
/// earlier ones in exactly one articulation vertex. Isolated vertices form
/// single-vertex blocks.
pub fn simplify_biconnected(graph: &Graph) -> (Vec<Subgraph>, SimplifyHistory) {
    let (blocks, articulation) = biconnected_blocks(graph);
    let ordered = order_blocks(graph.n(), blocks);
    let parts: Vec<Subgraph> = ordered.iter().map(|b| Subgraph::of(graph, b.clone())).collect();
    let history = SimplifyHistory {
        events: vec![SimplifyEvent::ComponentSplit {
            first_part: 0,
            parts: ordered,
            shared: articulation,
        }],
    };
    (parts, history)
}

/// Biconnected blocks (sorted vertex lists) and sorted articulation vertices.
pub fn biconnected_blocks(graph: &Graph) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = graph.n();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| graph.neighbors(v)).collect();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut is_art = vec![false; n];
    let mut blocks = Vec::new();
    let mut time = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if adj[root].is_empty() {
            disc[root] = time;
            time += 1;
            blocks.push(vec![root]);
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        // (vertex, parent, next neighbor index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let u = adj[v][*next];
                *next += 1;
                if u == parent {
                    continue;
                }
                if disc[u] == usize::MAX {
                    disc[u] = time;
                    low[u] = time;
                    time += 1;
                    edge_stack.push((v, u));
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((u, v, 0));
                } else if disc[u] < disc[v] {
                    low[v] = low[v].min(disc[u]);
                    edge_stack.push((v, u));
                }
            } else {
                stack.pop();
                if parent == usize::MAX {
                    continue;
                }
                low[parent] = low[parent].min(low[v]);
                if low[v] >= disc[parent] {
                    if parent != root {
                        is_art[parent] = true;
                    }
                    let mut block = BTreeSet::new();
                    while let Some((a, b)) = edge_stack.pop() {
                        block.insert(a);
                        block.insert(b);
                        if (a, b) == (parent, v) {
                            break;
                        }
                    }
                    blocks.push(block.into_iter().collect());
                }
            }
        }
        if root_children > 1 {
            is_art[root] = true;
        }
    }
    let articulation = (0..n).filter(|&v| is_art[v]).collect();
    (blocks, articulation)
}

fn order_blocks(n: usize, mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    blocks.sort();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (b, verts) in blocks.iter().enumerate() {
        for &v in verts {
            incident[v].push(b);
        }
    }
    let mut placed = vec![false; blocks.len()];
    let mut order = Vec::with_capacity(blocks.len());
    let mut queue = VecDeque::new();
    for start in 0..blocks.len() {
        if placed[start] {
            continue;
        }
        placed[start] = true;
        queue.push_back(start);
        while let Some(b) = queue.pop_front() {
            order.push(b);
            for &v in &blocks[b] {
                for &nb in &incident[v] {
                    if !placed[nb] {
                        placed[nb] = true;
                        queue.push_back(nb);
                    }
                }
            }
        }
    }
    order.into_iter().map(|b| std::mem::take(&mut blocks[b])).collect()
}

/// Merges the non-adjacent pair of every K4-minus-one-edge (for k = 3).
///
/// The missing pair must not be joined by a stitch edge either. Scanning
/// restarts after each merge in sorted vertex order; the smaller id is kept.
pub fn merge_subk4(graph: &Graph, k: usize) -> Result<(Subgraph, SimplifyHistory), SimplifyError> {
    if k != 3 {
        return Err(SimplifyError::WrongK(k));
    }
    let mut w = WorkGraph::from_graph(graph);
    let mut events = Vec::new();
    while let Some((c, d)) = find_subk4(&w) {
        w.merge(c, d);
        events.push(SimplifyEvent::MergedPair { kept: c, removed: d });
    }
    Ok((w.to_subgraph(), SimplifyHistory { events }))
}

fn find_subk4(w: &WorkGraph) -> Option<(usize, usize)> {
    for a in 0..w.alive.len() {
        if !w.alive[a] {
            continue;
        }
        for &b in w.conflict[a].range(a + 1..) {
            let common: Vec<usize> = w.conflict[a].intersection(&w.conflict[b]).copied().collect();
            for (i, &c) in common.iter().enumerate() {
                for &d in &common[i + 1..] {
                    if !w.conflict[c].contains(&d) && !w.stitch[c].contains(&d) {
                        return Some((c, d));
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyStats {
    pub vertices: usize,
    pub hidden: usize,
    pub merged: usize,
    pub parts: usize,
    pub largest_part: usize,
}

/// Result of applying every technique enabled by a level.
#[derive(Debug, Clone)]
pub struct Simplified {
    pub history: SimplifyHistory,
    /// Parts left to color, in recovery order.
    pub parts: Vec<Subgraph>,
    pub stats: SimplifyStats,
}

/// Applies the techniques of `level` to `graph`.
///
/// ICC splits first; within each component small-degree vertices are hidden,
/// sub-K4 pairs merged (level 4, k = 3 only), the remainder re-split into
/// connected pieces and then into biconnected blocks.
pub fn simplify(graph: &Graph, k: usize, level: SimplifyLevel) -> Simplified {
    let mut history = SimplifyHistory::default();
    let mut parts: Vec<Subgraph> = Vec::new();
    let all: Vec<usize> = (0..graph.n()).collect();
    let pieces = if level >= SimplifyLevel::ICC {
        graph.components()
    } else if graph.n() > 0 {
        vec![all]
    } else {
        Vec::new()
    };

    for piece in pieces {
        let mut current = Subgraph::of(graph, piece);
        if level >= SimplifyLevel::HIDE_SMALL_DEGREE {
            let (core, h) = simplify_hide_small_degree(&current.graph, k);
            push_mapped(&mut history, h, &current.vertices);
            current = lift(core, &current.vertices);
        }
        if level >= SimplifyLevel::MERGE_SUBK4 && k == 3 {
            let (core, h) = merge_subk4(&current.graph, k).expect("k checked");
            push_mapped(&mut history, h, &current.vertices);
            current = lift(core, &current.vertices);
        }
        if current.vertices.is_empty() {
            continue;
        }
        let sub_pieces = if level >= SimplifyLevel::HIDE_SMALL_DEGREE {
            current.graph.components()
        } else {
            vec![(0..current.graph.n()).collect()]
        };
        for sp in sub_pieces {
            let sp_global: Vec<usize> = sp.iter().map(|&v| current.vertices[v]).collect();
            let sp_graph = current.graph.induced(&sp);
            if level >= SimplifyLevel::BICONNECTED {
                let (blocks, h) = simplify_biconnected(&sp_graph);
                let first = parts.len();
                for ev in h.events {
                    if let SimplifyEvent::ComponentSplit { parts: p, shared, .. } = ev {
                        history.events.push(SimplifyEvent::ComponentSplit {
                            first_part: first,
                            parts: p.iter().map(|b| b.iter().map(|&v| sp_global[v]).collect()).collect(),
                            shared: shared.iter().map(|&v| sp_global[v]).collect(),
                        });
                    }
                }
                parts.extend(blocks.into_iter().map(|b| lift(b, &sp_global)));
            } else {
                parts.push(Subgraph {
                    vertices: sp_global,
                    graph: sp_graph,
                });
            }
        }
    }

    let stats = SimplifyStats {
        vertices: graph.n(),
        hidden: history.events.iter().filter(|e| matches!(e, SimplifyEvent::HiddenVertex { .. })).count(),
        merged: history.events.iter().filter(|e| matches!(e, SimplifyEvent::MergedPair { .. })).count(),
        parts: parts.len(),
        largest_part: parts.iter().map(|p| p.vertices.len()).max().unwrap_or(0),
    };
    Simplified { history, parts, stats }
}

fn lift(sub: Subgraph, map: &[usize]) -> Subgraph {
    Subgraph {
        vertices: sub.vertices.iter().map(|&v| map[v]).collect(),
        graph: sub.graph,
    }
}

fn push_mapped(into: &mut SimplifyHistory, h: SimplifyHistory, map: &[usize]) {
    let m = |v: usize| map[v];
    for ev in h.events {
        into.events.push(match ev {
            SimplifyEvent::HiddenVertex {
                v,
                conflict_neighbors,
                stitch_neighbors,
            } => SimplifyEvent::HiddenVertex {
                v: m(v),
                conflict_neighbors: conflict_neighbors.into_iter().map(m).collect(),
                stitch_neighbors: stitch_neighbors.into_iter().map(m).collect(),
            },
            SimplifyEvent::MergedPair { kept, removed } => SimplifyEvent::MergedPair {
                kept: m(kept),
                removed: m(removed),
            },
            SimplifyEvent::ComponentSplit { first_part, parts, shared } => SimplifyEvent::ComponentSplit {
                first_part,
                parts: parts.into_iter().map(|p| p.into_iter().map(m).collect()).collect(),
                shared: shared.into_iter().map(m).collect(),
            },
        });
    }
}

/// Color for a restored vertex: no conflict-neighbor color if possible, then
/// the most agreeing stitch neighbors, then the lowest index.
pub fn pick_hidden_color(conflict_colors: &[Color], stitch_colors: &[Color], k: usize) -> Color {
    (0..k as Color)
        .min_by_key(|&c| {
            let clashes = conflict_colors.iter().filter(|&&x| x == c).count();
            let agree = stitch_colors.iter().filter(|&&x| x == c).count();
            (clashes, std::cmp::Reverse(agree), c)
        })
        .expect("k >= 1")
}

/// Writes `part` colors into `colors`, permuting them so any vertex already
/// colored keeps its color.
fn place_part(colors: &mut [Option<Color>], part: &Subgraph, part_colors: &[Color], k: usize) -> Result<(), SimplifyError> {
    if part_colors.len() != part.vertices.len() {
        return Err(SimplifyError::InconsistentHistory(format!(
            "part of {} vertices got {} colors",
            part.vertices.len(),
            part_colors.len()
        )));
    }
    // perm[solver color] = final color
    let mut perm: Vec<Option<Color>> = vec![None; k];
    let mut used = vec![false; k];
    for (i, &v) in part.vertices.iter().enumerate() {
        if let Some(fixed) = colors[v] {
            let c = part_colors[i] as usize;
            match perm[c] {
                Some(p) if p != fixed => {
                    return Err(SimplifyError::InconsistentHistory(format!("vertex {v} cannot be rotated to color {fixed}")))
                }
                Some(_) => {}
                None if used[fixed as usize] => {
                    return Err(SimplifyError::InconsistentHistory(format!("color {fixed} already taken in rotation at {v}")))
                }
                None => {
                    perm[c] = Some(fixed);
                    used[fixed as usize] = true;
                }
            }
        }
    }
    // complete the permutation: unassigned sources take free targets in order
    let sources: Vec<usize> = (0..k).filter(|&c| perm[c].is_none()).collect();
    // identity where possible keeps untouched colors stable
    for &c in &sources {
        if !used[c] {
            perm[c] = Some(c as Color);
            used[c] = true;
        }
    }
    for &c in &sources {
        if perm[c].is_none() {
            let t = (0..k as Color).find(|&t| !used[t as usize]).expect("permutation completes");
            perm[c] = Some(t);
            used[t as usize] = true;
        }
    }
    for (i, &v) in part.vertices.iter().enumerate() {
        let c = part_colors[i];
        if c as usize >= k {
            return Err(SimplifyError::InconsistentHistory(format!("color {c} out of range")));
        }
        colors[v] = perm[c as usize];
    }
    Ok(())
}

/// Rebuilds a full coloring of `graph` from colored parts and the history.
pub fn recover(
    graph: &Graph,
    history: &SimplifyHistory,
    parts: &[Subgraph],
    part_colors: &[Vec<Color>],
    k: usize,
    alpha: f64,
) -> Result<Solution, SimplifyError> {
    if parts.len() != part_colors.len() {
        return Err(SimplifyError::InconsistentHistory(format!(
            "{} parts but {} part colorings",
            parts.len(),
            part_colors.len()
        )));
    }
    let mut colors: Vec<Option<Color>> = vec![None; graph.n()];
    let mut in_split = vec![false; parts.len()];
    for ev in &history.events {
        if let SimplifyEvent::ComponentSplit { first_part, parts: p, .. } = ev {
            for i in *first_part..first_part + p.len() {
                if let Some(flag) = in_split.get_mut(i) {
                    *flag = true;
                }
            }
        }
    }
    for (i, part) in parts.iter().enumerate() {
        if !in_split[i] {
            place_part(&mut colors, part, &part_colors[i], k)?;
        }
    }

    for ev in history.events.iter().rev() {
        match ev {
            SimplifyEvent::ComponentSplit { first_part, parts: p, shared } => {
                for (offset, verts) in p.iter().enumerate() {
                    let idx = first_part + offset;
                    let part = parts
                        .get(idx)
                        .filter(|part| &part.vertices == verts)
                        .ok_or_else(|| SimplifyError::InconsistentHistory(format!("split part {idx} does not match")))?;
                    place_part(&mut colors, part, &part_colors[idx], k)?;
                }
                if let Some(&v) = shared.iter().find(|&&v| colors[v].is_none()) {
                    return Err(SimplifyError::InconsistentHistory(format!("shared vertex {v} left uncolored")));
                }
            }
            SimplifyEvent::MergedPair { kept, removed } => {
                let c = colors[*kept]
                    .ok_or_else(|| SimplifyError::InconsistentHistory(format!("merged vertex {kept} has no color")))?;
                colors[*removed] = Some(c);
            }
            SimplifyEvent::HiddenVertex {
                v,
                conflict_neighbors,
                stitch_neighbors,
            } => {
                let get = |ns: &[usize]| -> Result<Vec<Color>, SimplifyError> {
                    ns.iter()
                        .map(|&u| {
                            colors[u].ok_or_else(|| SimplifyError::InconsistentHistory(format!("neighbor {u} of hidden {v} uncolored")))
                        })
                        .collect()
                };
                let c = pick_hidden_color(&get(conflict_neighbors)?, &get(stitch_neighbors)?, k);
                colors[*v] = Some(c);
            }
        }
    }
    let full: Vec<Color> = colors
        .iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| SimplifyError::InconsistentHistory(format!("vertex {v} never colored"))))
        .collect::<Result<_, _>>()?;
    Ok(Solution::new(graph, full, alpha, true))
}
