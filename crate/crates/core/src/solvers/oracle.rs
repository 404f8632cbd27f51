//! Exhaustive reference solver.

use super::{ColoringInstance, SolveError};
use crate::cost::{Color, Solution};

pub const ORACLE_LIMIT: usize = 16;

/// Enumerates all `k^n` colorings in lexicographic order and keeps the first
/// of minimum cost.
pub fn oracle_solve(instance: &ColoringInstance<'_>) -> Result<Solution, SolveError> {
    let g = instance.graph;
    let n = g.n();
    if n > ORACLE_LIMIT {
        return Err(SolveError::TooLarge { n, limit: ORACLE_LIMIT });
    }
    if n == 0 {
        return Ok(Solution::empty());
    }
    let k = instance.k as Color;
    let mut colors = vec![0 as Color; n];
    // Running counts, updated per changed digit.
    let mut cn = g.conflict_edges().len();
    let mut st = 0usize;
    let mut best = (cn as f64 + instance.alpha * st as f64, colors.clone());

    let recount = |v: usize, colors: &[Color], sign: bool, cn: &mut usize, st: &mut usize| {
        let c = colors[v];
        let same_c = g.conflict_neighbors(v).iter().filter(|&&u| colors[u] == c).count();
        let diff_s = g.stitch_neighbors(v).iter().filter(|&&u| colors[u] != c).count();
        if sign {
            *cn += same_c;
            *st += diff_s;
        } else {
            *cn -= same_c;
            *st -= diff_s;
        }
    };

    loop {
        // odometer: last vertex is the fastest digit
        let mut v = n;
        loop {
            if v == 0 {
                return Ok(Solution::new(g, best.1, instance.alpha, true));
            }
            v -= 1;
            recount(v, &colors, false, &mut cn, &mut st);
            if colors[v] + 1 < k {
                colors[v] += 1;
                recount(v, &colors, true, &mut cn, &mut st);
                break;
            }
            colors[v] = 0;
            recount(v, &colors, true, &mut cn, &mut st);
        }
        let cost = cn as f64 + instance.alpha * st as f64;
        if cost < best.0 {
            best = (cost, colors.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::solvers::testgraphs::*;

    #[test]
    fn examples() {
        let one = Graph::empty(1);
        let s = oracle_solve(&ColoringInstance::new(&one, 3, 0.1).unwrap()).unwrap();
        assert_eq!((s.colors, s.cost), (vec![0], 0.0));
        let g = k4();
        assert_eq!(oracle_solve(&ColoringInstance::new(&g, 3, 0.1).unwrap()).unwrap().cost, 1.0);
        let g = triangle();
        let s = oracle_solve(&ColoringInstance::new(&g, 3, 0.1).unwrap()).unwrap();
        assert_eq!((s.cost, s.colors), (0.0, vec![0, 1, 2]));
        let g = split_k4();
        assert_eq!(oracle_solve(&ColoringInstance::new(&g, 3, 0.1).unwrap()).unwrap().cost, 0.1);
        assert!(matches!(
            oracle_solve(&ColoringInstance::new(&Graph::empty(17), 3, 0.1).unwrap()),
            Err(SolveError::TooLarge { .. })
        ));
    }
}
