//! End-to-end decomposition: load, build graphs, insert stitches, simplify,
//! solve components in parallel, recover, and emit.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{debug, info};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{Color, Cost, Solution, DEFAULT_ALPHA};
use crate::geom::{Layout, ShapeMode, DEFAULT_MIN_COLOR_DIST_NM};
use crate::graph::{build_layout_graph, Graph};
use crate::io::{self, ColorMap, GdsReadOptions, JsonReadOptions, LayoutIoError};
use crate::par;
use crate::simplify::{recover, simplify, SimplifyError, SimplifyLevel, SimplifyStats, Subgraph};
use crate::solvers::{self, Algorithm, Budget, ColoringInstance, SdpParams, SolveError, DEFAULT_TIME_BUDGET};
use crate::stitch::{build_decomposed_graph, generate_stitch_candidates, CandidatePolicy, DecomposedGraph, ProjectionMargin, StitchConfig, StitchError};

pub use crate::cost::compute_cost;

/// First output layer for colored GDSII; color `c` goes to `COLOR_LAYER_BASE + c`.
pub const COLOR_LAYER_BASE: i32 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InputFormat {
    Gds,
    Json,
}

impl InputFormat {
    pub fn from_path(path: &Path) -> Option<InputFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "gds" | "gds2" | "gdsii" => Some(InputFormat::Gds),
            "json" => Some(InputFormat::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    /// Guessed from the input extension when unset.
    pub format: Option<InputFormat>,
    /// GDSII layer to read; all layers when unset.
    pub layer: Option<i32>,
    pub k: usize,
    pub alpha: f64,
    /// Overrides the distance stored in a JSON layout; GDSII inputs use 120 nm when unset.
    pub min_color_dist_nm: Option<i64>,
    pub algorithm: Algorithm,
    pub simplify_level: SimplifyLevel,
    pub threads: usize,
    pub shape: ShapeMode,
    pub stitch: bool,
    /// Defaults to one candidate per feature for dancing links, all otherwise.
    pub policy: Option<CandidatePolicy>,
    pub margin: ProjectionMargin,
    pub time_budget: Duration,
    pub sdp: SdpParams,
    pub out_gds: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            format: None,
            layer: None,
            k: 3,
            alpha: DEFAULT_ALPHA,
            min_color_dist_nm: None,
            algorithm: Algorithm::Backtrack,
            simplify_level: SimplifyLevel::default(),
            threads: 8,
            shape: ShapeMode::Polygon,
            stitch: true,
            policy: None,
            margin: ProjectionMargin::Full,
            time_budget: DEFAULT_TIME_BUDGET,
            sdp: SdpParams::default(),
            out_gds: None,
            out_svg: None,
            report: None,
        }
    }
}

impl RunConfig {
    pub fn effective_policy(&self) -> CandidatePolicy {
        self.policy.unwrap_or(match self.algorithm {
            Algorithm::DancingLinks => CandidatePolicy::OnePerFeature,
            _ => CandidatePolicy::All,
        })
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if !(2..=8).contains(&self.k) {
            return bad(format!("color count must be 2..=8, got {}", self.k));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be a non-negative number, got {}", self.alpha));
        }
        if self.threads == 0 {
            return bad("thread count must be at least 1".into());
        }
        if let Some(d) = self.min_color_dist_nm.filter(|&d| d <= 0) {
            return bad(format!("coloring distance must be positive, got {d}"));
        }
        if self.algorithm == Algorithm::Sdp && self.k != 3 {
            return bad(format!("SDP supports k = 3 only, got {}", self.k));
        }
        if self.algorithm == Algorithm::Ilp && !(3..=4).contains(&self.k) {
            return bad(format!("ILP supports k = 3 or 4, got {}", self.k));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("loading {path}: {source}")]
    Load { path: PathBuf, source: LayoutIoError },
    #[error("writing {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("emitting output: {0}")]
    Emit(LayoutIoError),
    #[error("stitch insertion: {0}")]
    Stitch(#[from] StitchError),
    #[error("solving component {component}: {source}")]
    Solve { component: usize, source: SolveError },
    #[error("recovering component {component}: {source}")]
    Recover { component: usize, source: SimplifyError },
}

impl PipelineError {
    /// 2 configuration, 3 input/output, 4 budget exhausted, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Read { .. } | PipelineError::Load { .. } | PipelineError::Write { .. } | PipelineError::Emit(_) => 3,
            PipelineError::Solve {
                source: SolveError::BudgetExceeded,
                ..
            } => 4,
            PipelineError::Solve {
                source: SolveError::UnsupportedK { .. } | SolveError::InvalidInstance(_),
                ..
            } => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub id: usize,
    pub vertices: usize,
    pub conflict_edges: usize,
    pub stitch_edges: usize,
    pub simplification: SimplifyStats,
    pub conflict_count: usize,
    pub stitch_count: usize,
    pub cost: f64,
    pub optimal: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyTotals {
    pub vertices: usize,
    pub hidden: usize,
    pub merged: usize,
    pub parts: usize,
    pub largest_part: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: Algorithm,
    pub k: usize,
    pub alpha: f64,
    pub conflict_count: usize,
    pub stitch_count: usize,
    pub cost: f64,
    pub wall_time_s: f64,
    pub optimal: bool,
    pub features: usize,
    pub segments: usize,
    pub stitch_candidates: usize,
    pub simplification: SimplifyTotals,
    pub per_component: Vec<ComponentReport>,
}

impl RunReport {
    /// The report with wall time zeroed, for comparing runs.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            wall_time_s: 0.0,
            ..self.clone()
        }
    }
}

pub fn write_report_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub decomposed: DecomposedGraph,
    /// Color of every segment of `decomposed`.
    pub colors: Vec<Color>,
}

struct ComponentResult {
    colors: Vec<Color>,
    stats: SimplifyStats,
    optimal: bool,
}

fn solve_at(graph: &Graph, config: &RunConfig, level: SimplifyLevel, budget: Budget) -> Result<(ComponentResult, Solution), ComponentError> {
    let s = simplify(graph, config.k, level);
    let mut part_colors = Vec::with_capacity(s.parts.len());
    let mut optimal = true;
    for Subgraph { graph: pg, .. } in &s.parts {
        let inst = ColoringInstance::new(pg, config.k, config.alpha).map_err(|e| (Some(e), None))?;
        let sol = solvers::solve(&inst, config.algorithm, budget, &config.sdp).map_err(|e| (Some(e), None))?;
        optimal &= sol.optimal;
        part_colors.push(sol.colors);
    }
    let sol = recover(graph, &s.history, &s.parts, &part_colors, config.k, config.alpha).map_err(|e| (None, Some(e)))?;
    let res = ComponentResult {
        colors: sol.colors.clone(),
        stats: s.stats,
        optimal,
    };
    Ok((res, sol))
}

type ComponentError = (Option<SolveError>, Option<SimplifyError>);

fn solve_component(graph: &Graph, config: &RunConfig, budget: Budget) -> Result<ComponentResult, ComponentError> {
    let (res, sol) = solve_at(graph, config, config.simplify_level, budget)?;
    // Merged pairs are forced equal only when a conflict-free coloring exists.
    // A leftover conflict means there is none, so the merge may have cost
    // optimality; solve again without it and keep the cheaper coloring.
    if sol.conflicts > 0 && res.stats.merged > 0 {
        let (alt, alt_sol) = solve_at(graph, config, SimplifyLevel::BICONNECTED, budget)?;
        if alt_sol.cost < sol.cost {
            return Ok(alt);
        }
    }
    Ok(res)
}

/// Runs every stage after loading on an in-memory layout.
pub fn run_layout(layout: &Layout, config: &RunConfig) -> Result<RunOutcome, PipelineError> {
    config.validate()?;
    let start = Instant::now();
    let budget = Budget::new(config.time_budget);
    let threads = config.threads;

    let lg = build_layout_graph(layout, threads);
    debug!("layout graph: {} features, {} conflict edges", lg.n, lg.conflict_edges.len());
    let candidates = if config.stitch {
        let sc = StitchConfig {
            policy: config.effective_policy(),
            margin: config.margin,
        };
        generate_stitch_candidates(&lg, layout, sc, threads)
    } else {
        Vec::new()
    };
    let dg = build_decomposed_graph(&lg, layout, &candidates, threads)?;
    let g = &dg.graph;
    debug!(
        "decomposed graph: {} segments, {} conflict edges, {} stitch edges",
        dg.m(),
        g.conflict_edges().len(),
        g.stitch_edges().len()
    );

    let components = g.components();
    let subgraphs: Vec<Subgraph> = components.into_iter().map(|c| Subgraph::of(g, c)).collect();
    let results = par::map(&subgraphs, threads, |sub| solve_component(&sub.graph, config, budget));

    let mut colors: Vec<Color> = vec![0; dg.m()];
    let mut per_component = Vec::with_capacity(subgraphs.len());
    let mut totals = SimplifyTotals::default();
    let mut optimal = true;
    for (id, (sub, res)) in subgraphs.iter().zip(results).enumerate() {
        let res = res.map_err(|e| match e {
            (Some(source), _) => PipelineError::Solve { component: id, source },
            (None, Some(source)) => PipelineError::Recover { component: id, source },
            (None, None) => unreachable!(),
        })?;
        for (i, &v) in sub.vertices.iter().enumerate() {
            colors[v] = res.colors[i];
        }
        let c = Cost::of(&sub.graph, &res.colors, config.alpha);
        totals.vertices += res.stats.vertices;
        totals.hidden += res.stats.hidden;
        totals.merged += res.stats.merged;
        totals.parts += res.stats.parts;
        totals.largest_part = totals.largest_part.max(res.stats.largest_part);
        optimal &= res.optimal;
        per_component.push(ComponentReport {
            id,
            vertices: sub.vertices.len(),
            conflict_edges: sub.graph.conflict_edges().len(),
            stitch_edges: sub.graph.stitch_edges().len(),
            simplification: res.stats,
            conflict_count: c.conflicts,
            stitch_count: c.stitches,
            cost: c.cost,
            optimal: res.optimal,
        });
    }

    let total = Cost::of(g, &colors, config.alpha);
    let report = RunReport {
        algorithm: config.algorithm,
        k: config.k,
        alpha: config.alpha,
        conflict_count: total.conflicts,
        stitch_count: total.stitches,
        cost: total.cost,
        wall_time_s: start.elapsed().as_secs_f64(),
        optimal: optimal && config.algorithm.is_exact(),
        features: layout.len(),
        segments: dg.m(),
        stitch_candidates: candidates.len(),
        simplification: totals,
        per_component,
    };
    info!(
        "{}: cn {} st {} cost {} in {:.3}s",
        report.algorithm, report.conflict_count, report.stitch_count, report.cost, report.wall_time_s
    );
    Ok(RunOutcome {
        report,
        decomposed: dg,
        colors,
    })
}

/// Reads the configured input file.
pub fn load_layout(config: &RunConfig) -> Result<Layout, PipelineError> {
    let path = config.input.clone().ok_or_else(|| PipelineError::Config("no input file given".into()))?;
    let format = match config.format.or_else(|| InputFormat::from_path(&path)) {
        Some(f) => f,
        None => return Err(PipelineError::Config(format!("cannot tell the format of {}; pass a format", path.display()))),
    };
    let bytes = std::fs::read(&path).map_err(|source| PipelineError::Read { path: path.clone(), source })?;
    let load = |source| PipelineError::Load { path: path.clone(), source };
    match format {
        InputFormat::Gds => {
            let opts = GdsReadOptions {
                layer: config.layer,
                shape: config.shape,
                min_color_dist_nm: config.min_color_dist_nm.unwrap_or(DEFAULT_MIN_COLOR_DIST_NM),
            };
            Ok(io::read_gds_with(&bytes, &opts).map_err(load)?.layout)
        }
        InputFormat::Json => {
            let text = String::from_utf8(bytes).map_err(|e| {
                load(LayoutIoError::SchemaViolation {
                    path: ".".into(),
                    message: e.to_string(),
                })
            })?;
            let opts = JsonReadOptions {
                shape: config.shape,
                min_color_dist_nm: config.min_color_dist_nm,
            };
            let mut layout = io::read_layout_json_with(&text, &opts).map_err(load)?;
            if let Some(layer) = config.layer {
                layout = Layout::new(
                    layout.features.into_iter().filter(|f| f.layer == layer).collect(),
                    layout.db_unit_nm,
                    layout.min_color_dist_nm,
                )
                .expect("validated on load");
            }
            Ok(layout)
        }
    }
}

fn write_file(path: &Path, data: &[u8]) -> Result<(), PipelineError> {
    std::fs::write(path, data).map_err(|source| PipelineError::Write {
        path: path.to_path_buf(),
        source,
    })
}

/// Load, decompose, and write the configured outputs.
pub fn run(config: &RunConfig) -> Result<RunReport, PipelineError> {
    config.validate()?;
    let start = Instant::now();
    let layout = load_layout(config)?;
    let mut out = run_layout(&layout, config)?;
    out.report.wall_time_s = start.elapsed().as_secs_f64();

    let seg_layout = out.decomposed.segment_layout(&layout);
    if let Some(p) = &config.out_gds {
        let bytes = io::write_gds(&seg_layout, &out.colors, &ColorMap::sequential(COLOR_LAYER_BASE, config.k)).map_err(PipelineError::Emit)?;
        write_file(p, &bytes)?;
    }
    if let Some(p) = &config.out_svg {
        write_file(p, io::write_svg(&seg_layout, &out.colors, &out.decomposed.stitch_lines).as_bytes())?;
    }
    if let Some(p) = &config.report {
        write_file(p, write_report_json(&out.report).as_bytes())?;
    }
    Ok(out.report)
}
