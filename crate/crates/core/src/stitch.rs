//! Stitch candidate generation by neighbor projection, and the decomposed
//! (segment-level) graph with conflict and stitch edges.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{merge_connected_rects, Axis, Feature, Layout, Rect};
use crate::graph::{near_pairs, Graph, LayoutGraph};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StitchError {
    #[error("cut at {cut} is not strictly inside feature {feature}")]
    CutOutsideFeature { feature: usize, cut: i64 },
    #[error("candidate refers to unknown feature {0}")]
    UnknownFeature(usize),
    #[error("cuts on feature {0} leave a disconnected segment")]
    DisconnectedSegment(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CandidatePolicy {
    /// Every legal gap yields a candidate.
    #[default]
    All,
    /// At most one candidate per feature.
    OnePerFeature,
}

/// How far a neighbor's shadow is widened on each side before gaps are taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ProjectionMargin {
    /// The full minimum coloring distance.
    #[default]
    Full,
    /// Half of it, rounded down.
    Half,
}

impl ProjectionMargin {
    fn amount(self, dist: i64) -> i64 {
        match self {
            ProjectionMargin::Full => dist,
            ProjectionMargin::Half => dist / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StitchConfig {
    pub policy: CandidatePolicy,
    pub margin: ProjectionMargin,
}

/// A cut position across a feature's long axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StitchCandidate {
    pub feature_id: usize,
    pub axis: Axis,
    pub cut_coord: i64,
}

/// Covered intervals on `feature`'s long axis, as a sorted disjoint union.
///
/// Every neighbor rectangle closer than `dist` to the feature casts its span,
/// widened by the margin and clipped to the feature extent.
pub fn project_neighbors(feature: &Feature, neighbors: &[&Feature], dist: i64, margin: ProjectionMargin) -> Vec<(i64, i64)> {
    let axis = feature.long_axis();
    let (lo, hi) = feature.bbox().span(axis);
    let limit = (dist as u128) * (dist as u128);
    let grow = margin.amount(dist);
    let mut spans: Vec<(i64, i64)> = Vec::new();
    for nb in neighbors {
        for r in &nb.rects {
            if !feature.rects.iter().any(|f| crate::geom::gap_sq(f, r) < limit) {
                continue;
            }
            let (a, b) = r.span(axis);
            let (a, b) = ((a - grow).max(lo), (b + grow).min(hi));
            if a <= b {
                spans.push((a, b));
            }
        }
    }
    union_intervals(spans)
}

fn union_intervals(mut spans: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    spans.sort_unstable();
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(spans.len());
    for (a, b) in spans {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

/// Cuts `feature` at the sorted `cuts`; `None` if any piece is not one connected shape.
pub fn split_feature(feature: &Feature, axis: Axis, cuts: &[i64]) -> Option<Vec<Vec<Rect>>> {
    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(i64::MIN);
    bounds.extend_from_slice(cuts);
    bounds.push(i64::MAX);
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    for w in bounds.windows(2) {
        let piece: Vec<Rect> = feature.rects.iter().filter_map(|r| r.clip(axis, w[0], w[1])).collect();
        if piece.is_empty() || (piece.len() > 1 && merge_connected_rects(&piece).len() != 1) {
            return None;
        }
        pieces.push(piece);
    }
    Some(pieces)
}

fn candidates_for_feature(layout: &Layout, graph: &LayoutGraph, fid: usize, config: StitchConfig) -> Vec<StitchCandidate> {
    let feature = &layout.features[fid];
    let axis = feature.long_axis();
    let neighbors: Vec<&Feature> = graph.adjacency[fid].iter().map(|&j| &layout.features[j]).collect();
    let covered = project_neighbors(feature, &neighbors, layout.min_color_dist_nm, config.margin);
    let mut cuts: Vec<i64> = covered
        .windows(2)
        .filter(|w| w[1].0 - w[0].1 >= 2)
        .map(|w| (w[0].1 + w[1].0).div_euclid(2))
        .collect();
    let simple = feature.rects.len() == 1;

    match config.policy {
        CandidatePolicy::All => {
            if !simple {
                let mut accepted: Vec<i64> = Vec::new();
                for c in cuts {
                    accepted.push(c);
                    if split_feature(feature, axis, &accepted).is_none() {
                        accepted.pop();
                    }
                }
                cuts = accepted;
            }
        }
        CandidatePolicy::OnePerFeature => {
            if !simple {
                cuts.retain(|&c| split_feature(feature, axis, &[c]).is_some());
            }
            let grow = config.margin.amount(layout.min_color_dist_nm);
            let limit = (layout.min_color_dist_nm as u128).pow(2);
            let side_counts = |c: i64| {
                let (mut left, mut right) = (0usize, 0usize);
                for nb in &neighbors {
                    let near = nb
                        .rects
                        .iter()
                        .filter(|r| feature.rects.iter().any(|f| crate::geom::gap_sq(f, r) < limit));
                    let (mut l, mut r) = (false, false);
                    for rect in near {
                        let (a, b) = rect.span(axis);
                        if b + grow < c {
                            l = true;
                        }
                        if a - grow > c {
                            r = true;
                        }
                    }
                    left += l as usize;
                    right += r as usize;
                }
                left.abs_diff(right)
            };
            cuts = cuts.iter().copied().min_by_key(|&c| (side_counts(c), c)).into_iter().collect();
        }
    }
    cuts.into_iter()
        .map(|cut_coord| StitchCandidate {
            feature_id: fid,
            axis,
            cut_coord,
        })
        .collect()
}

/// Stitch candidates for all features, ordered by `(feature_id, cut_coord)`.
///
/// A candidate sits at the midpoint (rounded down) of every uncovered open gap
/// that lies between two covered intervals. Gaps touching a feature end yield
/// nothing.
pub fn generate_stitch_candidates(graph: &LayoutGraph, layout: &Layout, config: StitchConfig, threads: usize) -> Vec<StitchCandidate> {
    par::map_range(layout.len(), threads, |fid| candidates_for_feature(layout, graph, fid, config))
        .into_iter()
        .flatten()
        .collect()
}

/// A piece of a feature between consecutive cuts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub feature_id: usize,
    pub rects: Vec<Rect>,
}

/// The line drawn for a stitch edge, across the feature at `cut`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StitchLine {
    pub axis: Axis,
    pub cut: i64,
    pub cross_lo: i64,
    pub cross_hi: i64,
}

/// Segment-level graph. Segment ids run feature by feature, and along the
/// feature's long axis within it.
#[derive(Debug, Clone, PartialEq)]
pub struct DecomposedGraph {
    pub segments: Vec<Segment>,
    pub seg_owner: Vec<usize>,
    pub graph: Graph,
    /// One line per stitch edge, parallel to `graph.stitch_edges()`.
    pub stitch_lines: Vec<StitchLine>,
}

impl DecomposedGraph {
    pub fn m(&self) -> usize {
        self.segments.len()
    }

    /// The segments as a layout, one feature per segment.
    pub fn segment_layout(&self, layout: &Layout) -> Layout {
        let features = self
            .segments
            .iter()
            .enumerate()
            .map(|(id, s)| Feature {
                id,
                layer: layout.features[s.feature_id].layer,
                rects: s.rects.clone(),
            })
            .collect();
        Layout {
            features,
            db_unit_nm: layout.db_unit_nm,
            min_color_dist_nm: layout.min_color_dist_nm,
        }
    }

    /// Contracts stitch paths back to features.
    pub fn quotient_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<(usize, usize)> = self
            .graph
            .conflict_edges()
            .iter()
            .map(|&(a, b)| {
                let (fa, fb) = (self.seg_owner[a], self.seg_owner[b]);
                (fa.min(fb), fa.max(fb))
            })
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}

/// Splits features at the candidate cuts and rebuilds conflicts on segments.
pub fn build_decomposed_graph(
    graph: &LayoutGraph,
    layout: &Layout,
    candidates: &[StitchCandidate],
    threads: usize,
) -> Result<DecomposedGraph, StitchError> {
    debug_assert_eq!(graph.n, layout.len());
    let mut cuts: Vec<Vec<i64>> = vec![Vec::new(); layout.len()];
    for c in candidates {
        let f = layout.features.get(c.feature_id).ok_or(StitchError::UnknownFeature(c.feature_id))?;
        let (lo, hi) = f.bbox().span(c.axis);
        if c.axis != f.long_axis() || c.cut_coord <= lo || c.cut_coord >= hi {
            return Err(StitchError::CutOutsideFeature {
                feature: c.feature_id,
                cut: c.cut_coord,
            });
        }
        cuts[c.feature_id].push(c.cut_coord);
    }

    let mut segments = Vec::new();
    let mut seg_owner = Vec::new();
    let mut stitch = Vec::new();
    let mut stitch_lines = Vec::new();
    for (fid, f) in layout.features.iter().enumerate() {
        let fc = &mut cuts[fid];
        fc.sort_unstable();
        fc.dedup();
        let axis = f.long_axis();
        let pieces = split_feature(f, axis, fc).ok_or(StitchError::DisconnectedSegment(fid))?;
        let first = segments.len();
        for (i, piece) in pieces.into_iter().enumerate() {
            if i > 0 {
                let cut = fc[i - 1];
                stitch.push((first + i - 1, first + i));
                stitch_lines.push(stitch_line(&segments[first + i - 1], axis, cut));
            }
            seg_owner.push(fid);
            segments.push(Segment {
                feature_id: fid,
                rects: piece,
            });
        }
    }

    let mut rects = Vec::new();
    let mut owner = Vec::new();
    for (sid, s) in segments.iter().enumerate() {
        for r in &s.rects {
            rects.push(*r);
            owner.push(sid);
        }
    }
    let conflict = near_pairs(&rects, &owner, layout.min_color_dist_nm, threads, |a, b| seg_owner[a] == seg_owner[b]);
    let graph = Graph::new(segments.len(), conflict, stitch);
    Ok(DecomposedGraph {
        segments,
        seg_owner,
        graph,
        stitch_lines,
    })
}

fn stitch_line(left: &Segment, axis: Axis, cut: i64) -> StitchLine {
    let cross = match axis {
        Axis::Horizontal => Axis::Vertical,
        Axis::Vertical => Axis::Horizontal,
    };
    let touching = left.rects.iter().filter(|r| r.span(axis).1 == cut).map(|r| r.span(cross));
    let (cross_lo, cross_hi) = touching.fold((i64::MAX, i64::MIN), |acc, s| (acc.0.min(s.0), acc.1.max(s.1)));
    StitchLine {
        axis,
        cut,
        cross_lo,
        cross_hi,
    }
}
