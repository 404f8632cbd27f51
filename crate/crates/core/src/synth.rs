//! Seeded generators for test and benchmark inputs.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::{Layout, Rect, ShapeMode};
use crate::graph::Graph;

/// Track-style layout: rows of horizontal wires, some with a vertical stub.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutParams {
    pub features: usize,
    pub row_len: i64,
    pub wire_width: (i64, i64),
    pub wire_len: (i64, i64),
    pub wire_gap: (i64, i64),
    /// Vertical spacing between consecutive rows.
    pub row_gap: (i64, i64),
    pub stub_prob: f64,
    pub min_color_dist_nm: i64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            features: 30,
            row_len: 3000,
            wire_width: (30, 50),
            wire_len: (80, 1200),
            wire_gap: (30, 300),
            row_gap: (40, 240),
            stub_prob: 0.15,
            min_color_dist_nm: 120,
        }
    }
}

impl LayoutParams {
    pub fn with_features(features: usize) -> Self {
        LayoutParams {
            features,
            ..Self::default()
        }
    }
}

pub fn random_layout(seed: u64, p: &LayoutParams) -> Layout {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rects = Vec::new();
    let mut count = 0;
    let mut y = 0;
    while count < p.features {
        let h = rng.random_range(p.wire_width.0..=p.wire_width.1);
        let gap_above = rng.random_range(p.row_gap.0..=p.row_gap.1);
        let mut x = rng.random_range(0..=p.wire_gap.1);
        while count < p.features {
            let len = rng.random_range(p.wire_len.0..=p.wire_len.1);
            if x + len > p.row_len {
                break;
            }
            rects.push(Rect::new(x, y, x + len, y + h, 1).expect("positive size"));
            if gap_above > 12 && len >= 60 && rng.random_bool(p.stub_prob) {
                let sx = rng.random_range(x..=x + len - 40);
                let sh = rng.random_range(5..=gap_above - 6);
                rects.push(Rect::new(sx, y + h, sx + 40, y + h + sh, 1).expect("positive size"));
            }
            count += 1;
            x += len + rng.random_range(p.wire_gap.0..=p.wire_gap.1);
        }
        y += h + gap_above;
    }
    Layout::from_rects(&rects, ShapeMode::Polygon, 1, p.min_color_dist_nm).expect("valid layout")
}

/// Random graph with each vertex pair a conflict edge with probability
/// `density`, plus `stitches` stitch edges on pairs without one.
pub fn random_graph(seed: u64, n: usize, density: f64, stitches: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut conflict = Vec::new();
    let mut free = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                conflict.push((i, j));
            } else {
                free.push((i, j));
            }
        }
    }
    let mut stitch = Vec::new();
    for _ in 0..stitches.min(free.len()) {
        let idx = rng.random_range(0..free.len());
        stitch.push(free.swap_remove(idx));
    }
    Graph::new(n, conflict, stitch)
}
