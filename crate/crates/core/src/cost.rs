//! Decomposition cost: conflicts plus weighted stitches.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

pub type Color = u8;

pub const DEFAULT_ALPHA: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CostError {
    #[error("vertex {0} has no color")]
    UncoloredVertex(usize),
    #[error("coloring covers {got} vertices, graph has {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// `cost = conflicts + alpha * stitches`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cost {
    pub conflicts: usize,
    pub stitches: usize,
    pub cost: f64,
}

impl Cost {
    pub fn from_counts(conflicts: usize, stitches: usize, alpha: f64) -> Cost {
        Cost {
            conflicts,
            stitches,
            cost: conflicts as f64 + alpha * stitches as f64,
        }
    }

    /// Recount for a complete coloring.
    pub fn of(graph: &Graph, colors: &[Color], alpha: f64) -> Cost {
        assert_eq!(colors.len(), graph.n());
        let conflicts = graph.conflict_edges().iter().filter(|&&(a, b)| colors[a] == colors[b]).count();
        let stitches = graph.stitch_edges().iter().filter(|&&(a, b)| colors[a] != colors[b]).count();
        Cost::from_counts(conflicts, stitches, alpha)
    }
}

/// Exact recount of conflict and stitch counts for a possibly partial coloring.
pub fn compute_cost(graph: &Graph, colors: &[Option<Color>], alpha: f64) -> Result<Cost, CostError> {
    if colors.len() != graph.n() {
        return Err(CostError::LengthMismatch {
            expected: graph.n(),
            got: colors.len(),
        });
    }
    let full: Vec<Color> = colors
        .iter()
        .enumerate()
        .map(|(v, c)| c.ok_or(CostError::UncoloredVertex(v)))
        .collect::<Result<_, _>>()?;
    Ok(Cost::of(graph, &full, alpha))
}

/// A complete color assignment with its recounted cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub colors: Vec<Color>,
    pub conflicts: usize,
    pub stitches: usize,
    pub cost: f64,
    /// False when a search stopped on its time budget.
    pub optimal: bool,
}

impl Solution {
    pub fn new(graph: &Graph, colors: Vec<Color>, alpha: f64, optimal: bool) -> Solution {
        let c = Cost::of(graph, &colors, alpha);
        Solution {
            colors,
            conflicts: c.conflicts,
            stitches: c.stitches,
            cost: c.cost,
            optimal,
        }
    }

    pub fn empty() -> Solution {
        Solution {
            colors: Vec::new(),
            conflicts: 0,
            stitches: 0,
            cost: 0.0,
            optimal: true,
        }
    }
}
