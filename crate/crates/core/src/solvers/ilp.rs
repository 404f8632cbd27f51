//! Binary-encoded integer program for mask assignment.
//!
//! Each vertex color is two bits `x{i}_0 + 2 * x{i}_1`. For every conflict edge
//! a per-bit equality indicator is pinned by four inequalities, and the
//! conflict indicator is forced up when both bits agree. Stitch indicators
//! dominate every bit difference. With three colors the pattern `(1, 1)` is
//! forbidden.

use std::fmt::Write as _;

use super::{Budget, ColoringInstance, SolveError, Ticker};
use crate::cost::{Color, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(usize, i32)>,
    pub sense: Sense,
    pub rhs: i32,
}

impl LinearConstraint {
    fn holds(&self, x: &[bool]) -> bool {
        let lhs: i32 = self.terms.iter().map(|&(v, c)| c * x[v] as i32).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    /// All variables are binary. The first `2 * n` are the color bits.
    pub var_names: Vec<String>,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Vec<(usize, f64)>,
    /// `(i, j, [eq_bit0, eq_bit1], conflict)` per conflict edge.
    conflict_vars: Vec<(usize, usize, [usize; 2], usize)>,
    /// `(i, j, stitch)` per stitch edge.
    stitch_vars: Vec<(usize, usize, usize)>,
}

pub fn bit_var(vertex: usize, bit: usize) -> usize {
    2 * vertex + bit
}

/// Builds the model for `k` in {3, 4}.
pub fn build_ilp(instance: &ColoringInstance<'_>) -> Result<IlpModel, SolveError> {
    let k = instance.k;
    if !(3..=4).contains(&k) {
        return Err(SolveError::UnsupportedK { algorithm: "ILP", k });
    }
    let g = instance.graph;
    let n = g.n();
    let mut var_names: Vec<String> = (0..n).flat_map(|i| [format!("x{i}_0"), format!("x{i}_1")]).collect();
    let mut constraints = Vec::new();
    let mut objective = Vec::new();
    let mut conflict_vars = Vec::new();
    let mut stitch_vars = Vec::new();
    let new_var = |names: &mut Vec<String>, name: String| {
        names.push(name);
        names.len() - 1
    };

    for (e, &(i, j)) in g.conflict_edges().iter().enumerate() {
        let mut eq = [0; 2];
        for t in 0..2 {
            let z = new_var(&mut var_names, format!("e{e}_{t}"));
            eq[t] = z;
            let (xi, xj) = (bit_var(i, t), bit_var(j, t));
            let mk = |tag: &str, terms: Vec<(usize, i32)>, rhs: i32| LinearConstraint {
                name: format!("ce{e}_b{t}_{tag}"),
                terms,
                sense: Sense::Le,
                rhs,
            };
            // z >= xi + xj - 1 ; z >= 1 - xi - xj ; z <= 1 - xi + xj ; z <= 1 + xi - xj
            constraints.push(mk("both1", vec![(xi, 1), (xj, 1), (z, -1)], 1));
            constraints.push(mk("both0", vec![(xi, -1), (xj, -1), (z, -1)], -1));
            constraints.push(mk("diff_a", vec![(xi, 1), (xj, -1), (z, 1)], 1));
            constraints.push(mk("diff_b", vec![(xi, -1), (xj, 1), (z, 1)], 1));
        }
        let c = new_var(&mut var_names, format!("c{e}"));
        constraints.push(LinearConstraint {
            name: format!("ce{e}_same"),
            terms: vec![(eq[0], 1), (eq[1], 1), (c, -1)],
            sense: Sense::Le,
            rhs: 1,
        });
        objective.push((c, 1.0));
        conflict_vars.push((i, j, eq, c));
    }
    for (e, &(i, j)) in g.stitch_edges().iter().enumerate() {
        let s = new_var(&mut var_names, format!("s{e}"));
        for t in 0..2 {
            let (xi, xj) = (bit_var(i, t), bit_var(j, t));
            constraints.push(LinearConstraint {
                name: format!("se{e}_b{t}_a"),
                terms: vec![(xi, 1), (xj, -1), (s, -1)],
                sense: Sense::Le,
                rhs: 0,
            });
            constraints.push(LinearConstraint {
                name: format!("se{e}_b{t}_b"),
                terms: vec![(xi, -1), (xj, 1), (s, -1)],
                sense: Sense::Le,
                rhs: 0,
            });
        }
        objective.push((s, instance.alpha));
        stitch_vars.push((i, j, s));
    }
    if k == 3 {
        for i in 0..n {
            constraints.push(LinearConstraint {
                name: format!("mask{i}"),
                terms: vec![(bit_var(i, 0), 1), (bit_var(i, 1), 1)],
                sense: Sense::Le,
                rhs: 1,
            });
        }
    }
    Ok(IlpModel {
        n,
        k,
        alpha: instance.alpha,
        var_names,
        constraints,
        objective,
        conflict_vars,
        stitch_vars,
    })
}

impl IlpModel {
    pub fn num_bit_vars(&self) -> usize {
        2 * self.n
    }

    /// Full assignment implied by color bits, with every indicator at its
    /// least feasible value.
    pub fn complete(&self, colors: &[Color]) -> Vec<bool> {
        let mut x = vec![false; self.var_names.len()];
        for (i, &c) in colors.iter().enumerate() {
            x[bit_var(i, 0)] = c & 1 == 1;
            x[bit_var(i, 1)] = c & 2 == 2;
        }
        for &(i, j, eq, c) in &self.conflict_vars {
            for t in 0..2 {
                x[eq[t]] = x[bit_var(i, t)] == x[bit_var(j, t)];
            }
            x[c] = x[eq[0]] && x[eq[1]];
        }
        for &(i, j, s) in &self.stitch_vars {
            x[s] = (0..2).any(|t| x[bit_var(i, t)] != x[bit_var(j, t)]);
        }
        x
    }

    /// Objective value of `x`, or `None` if any constraint is violated.
    pub fn evaluate(&self, x: &[bool]) -> Option<f64> {
        if x.len() != self.var_names.len() || !self.constraints.iter().all(|c| c.holds(x)) {
            return None;
        }
        // integer part and stitch part summed separately so the value is
        // bit-identical to `conflicts + alpha * stitches`
        let conflicts = self.conflict_vars.iter().filter(|cv| x[cv.3]).count();
        let stitches = self.stitch_vars.iter().filter(|sv| x[sv.2]).count();
        Some(conflicts as f64 + self.alpha * stitches as f64)
    }
}

/// Writes the model in LP file format.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ mask assignment: {} vertices, k = {}, alpha = {}", model.n, model.k, model.alpha);
    out.push_str("Minimize\n obj:");
    if model.objective.is_empty() {
        if !model.var_names.is_empty() {
            let _ = write!(out, " 0 {}", model.var_names[0]);
        }
    } else {
        for (i, &(v, c)) in model.objective.iter().enumerate() {
            if i > 0 && i % 8 == 0 {
                out.push_str("\n     ");
            }
            let lead = if i == 0 { "" } else { " +" };
            let _ = write!(out, "{lead} {} {}", c, model.var_names[v]);
        }
    }
    out.push_str("\nSubject To\n");
    for c in &model.constraints {
        let _ = write!(out, " {}:", c.name);
        for (i, &(v, coef)) in c.terms.iter().enumerate() {
            let sign = if coef < 0 { "-" } else { "+" };
            let mag = coef.unsigned_abs();
            let lead = if i == 0 && coef >= 0 { String::new() } else { format!(" {sign}") };
            if mag == 1 {
                let _ = write!(out, "{lead} {}", model.var_names[v]);
            } else {
                let _ = write!(out, "{lead} {mag} {}", model.var_names[v]);
            }
        }
        let _ = writeln!(out, " {} {}", c.sense.symbol(), c.rhs);
    }
    out.push_str("Bounds\n");
    for name in &model.var_names {
        let _ = writeln!(out, " 0 <= {name} <= 1");
    }
    out.push_str("Binaries\n");
    for chunk in model.var_names.chunks(8) {
        let _ = writeln!(out, " {}", chunk.join(" "));
    }
    out.push_str("End\n");
    out
}

struct BranchAndBound<'a> {
    model: &'a IlpModel,
    /// Per vertex: earlier-index neighbors.
    conflict_back: Vec<Vec<usize>>,
    stitch_back: Vec<Vec<usize>>,
    bits: Vec<[bool; 2]>,
    best: Option<(f64, Vec<[bool; 2]>)>,
    ticker: Ticker,
}

impl BranchAndBound<'_> {
    fn bound(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    /// Branches on `x{i}_0` then `x{i}_1`; edges enter the bound once both
    /// endpoints are fully decided.
    fn branch(&mut self, i: usize, cn: usize, st: usize) {
        if i == self.model.n {
            let cost = cn as f64 + self.model.alpha * st as f64;
            if cost < self.bound() {
                self.best = Some((cost, self.bits.clone()));
            }
            return;
        }
        if self.ticker.stop() {
            return;
        }
        for b0 in [false, true] {
            for b1 in [false, true] {
                if self.model.k == 3 && b0 && b1 {
                    continue;
                }
                let pair = [b0, b1];
                let dc = self.conflict_back[i].iter().filter(|&&j| self.bits[j] == pair).count();
                let ds = self.stitch_back[i].iter().filter(|&&j| self.bits[j] != pair).count();
                let (ncn, nst) = (cn + dc, st + ds);
                if ncn as f64 + self.model.alpha * nst as f64 >= self.bound() {
                    continue;
                }
                self.bits[i] = pair;
                self.branch(i + 1, ncn, nst);
                if self.ticker.timed_out {
                    return;
                }
            }
        }
    }
}

/// Depth-first branch-and-bound over the color bits in variable order.
///
/// The incumbent prunes any node whose decided edges already cost at least as
/// much. The returned assignment is checked against every model constraint.
pub fn solve_ilp(model: &IlpModel, instance: &ColoringInstance<'_>, budget: Budget) -> Result<Solution, SolveError> {
    let g = instance.graph;
    if model.n != g.n() {
        return Err(SolveError::InvalidInstance(format!("model has {} vertices, graph {}", model.n, g.n())));
    }
    if model.n == 0 {
        return Ok(Solution::empty());
    }
    let mut conflict_back = vec![Vec::new(); model.n];
    let mut stitch_back = vec![Vec::new(); model.n];
    for &(i, j, _, _) in &model.conflict_vars {
        conflict_back[i.max(j)].push(i.min(j));
    }
    for &(i, j, _) in &model.stitch_vars {
        stitch_back[i.max(j)].push(i.min(j));
    }
    let mut bb = BranchAndBound {
        model,
        conflict_back,
        stitch_back,
        bits: vec![[false; 2]; model.n],
        best: None,
        ticker: Ticker::new(budget),
    };
    bb.branch(0, 0, 0);
    let optimal = !bb.ticker.timed_out;
    let (cost, bits) = bb.best.ok_or(SolveError::BudgetExceeded)?;
    let colors: Vec<Color> = bits.iter().map(|b| b[0] as Color + 2 * b[1] as Color).collect();
    let x = model.complete(&colors);
    debug_assert_eq!(model.evaluate(&x), Some(cost));
    if model.evaluate(&x).is_none() {
        return Err(SolveError::InvalidInstance("branch-and-bound produced an infeasible point".into()));
    }
    Ok(Solution::new(g, colors, instance.alpha, optimal))
}
