//! Depth-first branch-and-bound over vertex colors.

use super::{Budget, ColoringInstance, EarlierEdges, SolveError, Ticker};
use crate::cost::{Color, Solution};

struct Search<'a> {
    k: usize,
    alpha: f64,
    order: &'a [usize],
    earlier: EarlierEdges,
    colors: Vec<Color>,
    best: Option<(f64, Vec<Color>)>,
    ticker: Ticker,
}

impl Search<'_> {
    fn bound(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    fn dfs(&mut self, depth: usize, cn: usize, st: usize, used: usize) {
        if depth == self.order.len() {
            let cost = cn as f64 + self.alpha * st as f64;
            if cost < self.bound() {
                self.best = Some((cost, self.colors.clone()));
            }
            return;
        }
        if self.ticker.stop() {
            return;
        }
        let v = self.order[depth];
        // a fresh color beyond `used` is interchangeable with any other fresh one
        let limit = (used + 1).min(self.k);
        for c in 0..limit as Color {
            let dc = self.earlier.conflict[v].iter().filter(|&&u| self.colors[u] == c).count();
            let ds = self.earlier.stitch[v].iter().filter(|&&u| self.colors[u] != c).count();
            let (ncn, nst) = (cn + dc, st + ds);
            if ncn as f64 + self.alpha * nst as f64 >= self.bound() {
                continue;
            }
            self.colors[v] = c;
            self.dfs(depth + 1, ncn, nst, used.max(c as usize + 1));
            if self.ticker.timed_out {
                return;
            }
        }
    }
}

/// Exact DFS: vertices in BFS order from the highest-degree vertex, colors in
/// ascending order, pruning when the partial cost reaches the incumbent.
///
/// On budget exhaustion returns the best coloring so far with
/// `optimal = false`.
pub fn solve_backtracking(instance: &ColoringInstance<'_>, budget: Budget) -> Result<Solution, SolveError> {
    let g = instance.graph;
    if g.n() == 0 {
        return Ok(Solution::empty());
    }
    let order = g.bfs_order_from_max_degree();
    let mut s = Search {
        k: instance.k,
        alpha: instance.alpha,
        order: &order,
        earlier: EarlierEdges::new(g, &order),
        colors: vec![0; g.n()],
        best: None,
        ticker: Ticker::new(budget),
    };
    s.dfs(0, 0, 0, 0);
    let optimal = !s.ticker.timed_out;
    let (_, colors) = s.best.ok_or(SolveError::BudgetExceeded)?;
    Ok(Solution::new(g, colors, instance.alpha, optimal))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::solvers::testgraphs::*;

    fn run(g: &Graph, k: usize) -> Solution {
        solve_backtracking(&ColoringInstance::new(g, k, 0.1).unwrap(), Budget::unlimited()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(run(&k4(), 3).cost, 1.0);
        assert_eq!(run(&k4(), 4).cost, 0.0);
        let s = run(&split_k4(), 3);
        assert_eq!((s.cost, s.conflicts, s.stitches), (0.1, 0, 1));
        let e = run(&Graph::empty(0), 3);
        assert!(e.colors.is_empty() && e.cost == 0.0);
    }

    #[test]
    fn expired_budget_reports_non_optimal_or_nothing() {
        let big = Graph::new(40, (0..40).flat_map(|i| (i + 1..40).map(move |j| (i, j))), []);
        let budget = Budget::new(std::time::Duration::ZERO);
        match solve_backtracking(&ColoringInstance::new(&big, 3, 0.1).unwrap(), budget) {
            Ok(s) => assert!(!s.optimal),
            Err(e) => assert_eq!(e, SolveError::BudgetExceeded),
        }
    }
}
