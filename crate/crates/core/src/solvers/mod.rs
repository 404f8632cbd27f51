//! Color assignment engines.
//!
//! All engines take a [`ColoringInstance`] over one graph component and return
//! a complete [`Solution`]. Backtracking, ILP branch-and-bound and dancing
//! links are exact when they finish within budget; the vector relaxation is a
//! heuristic whose result is always valid but not necessarily optimal.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::Solution;
use crate::graph::Graph;

pub mod backtrack;
pub mod dlx;
pub mod ilp;
pub mod oracle;
pub mod sdp;

pub use backtrack::solve_backtracking;
pub use dlx::{solve_dlx, DlxMatrix};
pub use ilp::{build_ilp, export_lp, solve_ilp, IlpModel};
pub use oracle::oracle_solve;
pub use sdp::{relax_sdp, solve_sdp, Relaxation, SdpParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("{n} vertices is too many for exhaustive enumeration (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("{algorithm} does not support k = {k}")]
    UnsupportedK { algorithm: &'static str, k: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("time budget ran out before any complete coloring was found")]
    BudgetExceeded,
}

/// One component to color with `k` masks and stitch weight `alpha`.
#[derive(Debug, Clone, Copy)]
pub struct ColoringInstance<'a> {
    pub graph: &'a Graph,
    pub k: usize,
    pub alpha: f64,
}

impl<'a> ColoringInstance<'a> {
    pub fn new(graph: &'a Graph, k: usize, alpha: f64) -> Result<Self, SolveError> {
        if k < 2 || k > u8::MAX as usize {
            return Err(SolveError::InvalidInstance(format!("k = {k}")));
        }
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(SolveError::InvalidInstance(format!("alpha = {alpha}")));
        }
        Ok(ColoringInstance { graph, k, alpha })
    }
}

/// Wall-clock deadline, plus an optional cap on search nodes (deterministic).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    deadline: Option<Instant>,
    node_limit: Option<u64>,
}

pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(3600);

impl Budget {
    pub fn new(limit: Duration) -> Budget {
        Budget {
            deadline: Instant::now().checked_add(limit),
            node_limit: None,
        }
    }

    pub fn unlimited() -> Budget {
        Budget {
            deadline: None,
            node_limit: None,
        }
    }

    pub fn with_node_limit(self, nodes: u64) -> Budget {
        Budget {
            node_limit: Some(nodes),
            ..self
        }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Polls the clock every few thousand search nodes.
pub(crate) struct Ticker {
    budget: Budget,
    count: u64,
    pub(crate) timed_out: bool,
}

impl Ticker {
    pub(crate) fn new(budget: Budget) -> Self {
        Ticker {
            budget,
            count: 0,
            timed_out: false,
        }
    }

    #[inline]
    pub(crate) fn stop(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        self.count += 1;
        if self.budget.node_limit.is_some_and(|l| self.count > l) || (self.count % 4096 == 0 && self.budget.expired()) {
            self.timed_out = true;
        }
        self.timed_out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "ILP")]
    Ilp,
    #[serde(rename = "SDP")]
    Sdp,
    #[serde(rename = "BACKTRACK")]
    Backtrack,
    #[serde(rename = "DL")]
    DancingLinks,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ilp => "ILP",
            Algorithm::Sdp => "SDP",
            Algorithm::Backtrack => "BACKTRACK",
            Algorithm::DancingLinks => "DL",
        }
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Algorithm::Sdp)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "ILP" => Ok(Algorithm::Ilp),
            "SDP" => Ok(Algorithm::Sdp),
            "BACKTRACK" | "BACKTRACKING" => Ok(Algorithm::Backtrack),
            "DL" | "DLX" | "DANCING_LINKS" => Ok(Algorithm::DancingLinks),
            other => Err(format!("unknown algorithm '{other}' (expected ILP, SDP, BACKTRACK or DL)")),
        }
    }
}

/// Runs `algorithm` on one component.
pub fn solve(instance: &ColoringInstance<'_>, algorithm: Algorithm, budget: Budget, sdp: &SdpParams) -> Result<Solution, SolveError> {
    match algorithm {
        Algorithm::Backtrack => solve_backtracking(instance, budget),
        Algorithm::DancingLinks => solve_dlx(instance, budget),
        Algorithm::Ilp => {
            let model = build_ilp(instance)?;
            solve_ilp(&model, instance, budget)
        }
        Algorithm::Sdp => solve_sdp(instance, sdp, budget),
    }
}

/// Edges from each vertex to vertices placed earlier in `order`, split by kind.
pub(crate) struct EarlierEdges {
    pub conflict: Vec<Vec<usize>>,
    pub stitch: Vec<Vec<usize>>,
}

impl EarlierEdges {
    pub(crate) fn new(graph: &Graph, order: &[usize]) -> Self {
        let n = graph.n();
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut conflict = vec![Vec::new(); n];
        let mut stitch = vec![Vec::new(); n];
        for &(a, b) in graph.conflict_edges() {
            let (early, late) = if pos[a] < pos[b] { (a, b) } else { (b, a) };
            conflict[late].push(early);
        }
        for &(a, b) in graph.stitch_edges() {
            let (early, late) = if pos[a] < pos[b] { (a, b) } else { (b, a) };
            stitch[late].push(early);
        }
        EarlierEdges { conflict, stitch }
    }
}
