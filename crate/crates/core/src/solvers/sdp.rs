//! Vector relaxation for three masks.
//!
//! Each vertex gets a unit vector in R^3. Three colors map to three coplanar
//! vectors with pairwise inner product -1/2, so the per-edge terms
//! `(2/3) v_i.v_j + 1/3` (conflict) and `(2/3)(1 - v_i.v_j)` (stitch) equal the
//! discrete costs at integral points. The relaxation is minimized by
//! block-coordinate descent, then vertices whose vectors point the same way
//! are grouped and the group graph is colored exactly.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{solve_backtracking, Budget, ColoringInstance, SolveError};
use crate::cost::{Color, Solution};
use crate::graph::Graph;
use crate::util::UnionFind;

/// Vectors with inner product at least this are put in one color group.
pub const SAME_COLOR_DOT: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpParams {
    /// Maximum descent sweeps.
    pub rounds: usize,
    /// Stop when one sweep improves the objective by less than this.
    pub tol: f64,
    /// Seed for the initial vectors.
    pub seed: u64,
    /// Search-node cap for coloring the group graph.
    pub map_node_limit: u64,
}

impl Default for SdpParams {
    fn default() -> Self {
        SdpParams {
            rounds: 200,
            tol: 1e-6,
            seed: 1,
            map_node_limit: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relaxation {
    pub vectors: Vec<[f64; 3]>,
    /// Relaxed objective; an estimate of the optimum, not a certified bound.
    pub objective: f64,
    pub sweeps: usize,
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &[f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let r = norm(&v);
        if r > 1e-3 && r <= 1.0 {
            return [v[0] / r, v[1] / r, v[2] / r];
        }
    }
}

fn objective(g: &Graph, v: &[[f64; 3]], alpha: f64) -> f64 {
    let ce: f64 = g.conflict_edges().iter().map(|&(a, b)| 2.0 / 3.0 * dot(&v[a], &v[b]) + 1.0 / 3.0).sum();
    let se: f64 = g.stitch_edges().iter().map(|&(a, b)| 2.0 / 3.0 * (1.0 - dot(&v[a], &v[b]))).sum();
    ce + alpha * se
}

/// Block-coordinate descent: each sweep sets every vector to the unit
/// minimizer of its local linear term.
pub fn relax_sdp(graph: &Graph, alpha: f64, params: &SdpParams) -> Relaxation {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut v: Vec<[f64; 3]> = (0..graph.n()).map(|_| random_unit(&mut rng)).collect();
    let mut obj = objective(graph, &v, alpha);
    let mut sweeps = 0;
    while sweeps < params.rounds {
        sweeps += 1;
        for i in 0..graph.n() {
            let mut g = [0.0; 3];
            for &j in graph.conflict_neighbors(i) {
                for t in 0..3 {
                    g[t] += v[j][t];
                }
            }
            for &j in graph.stitch_neighbors(i) {
                for t in 0..3 {
                    g[t] -= alpha * v[j][t];
                }
            }
            let r = norm(&g);
            if r > 1e-12 {
                v[i] = [-g[0] / r, -g[1] / r, -g[2] / r];
            }
        }
        let next = objective(graph, &v, alpha);
        let gain = obj - next;
        obj = next;
        if gain < params.tol {
            break;
        }
    }
    Relaxation {
        vectors: v,
        objective: obj,
        sweeps,
    }
}

/// Groups vertices whose vectors are close; returns the group of each vertex,
/// numbered by smallest member.
pub fn group_vectors(vectors: &[[f64; 3]]) -> Vec<usize> {
    let n = vectors.len();
    let mut uf = UnionFind::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if dot(&vectors[i], &vectors[j]) >= SAME_COLOR_DOT {
                uf.union(i, j);
            }
        }
    }
    let mut id = vec![usize::MAX; n];
    let mut group = vec![0; n];
    let mut next = 0;
    for i in 0..n {
        let r = uf.find(i);
        if id[r] == usize::MAX {
            id[r] = next;
            next += 1;
        }
        group[i] = id[r];
    }
    group
}

/// Relaxes, groups, and colors the group graph. The result is always a
/// complete coloring; it is never marked optimal.
pub fn solve_sdp(instance: &ColoringInstance<'_>, params: &SdpParams, budget: Budget) -> Result<Solution, SolveError> {
    if instance.k != 3 {
        return Err(SolveError::UnsupportedK {
            algorithm: "SDP",
            k: instance.k,
        });
    }
    let g = instance.graph;
    if g.n() == 0 {
        return Ok(Solution::empty());
    }
    let relax = relax_sdp(g, instance.alpha, params);
    let group = group_vectors(&relax.vectors);
    let m = group.iter().max().map_or(0, |&x| x + 1);
    let lift = |edges: &[(usize, usize)]| -> Vec<(usize, usize)> {
        edges
            .iter()
            .map(|&(a, b)| (group[a], group[b]))
            .filter(|(a, b)| a != b)
            .collect()
    };
    let quotient = Graph::with_multi_edges(m, lift(g.conflict_edges()), lift(g.stitch_edges()));
    let q = ColoringInstance::new(&quotient, 3, instance.alpha)?;
    let qs = solve_backtracking(&q, budget.with_node_limit(params.map_node_limit))?;
    let colors: Vec<Color> = group.iter().map(|&gi| qs.colors[gi]).collect();
    Ok(Solution::new(g, colors, instance.alpha, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::testgraphs::*;

    #[test]
    fn triangle_vectors_spread_evenly() {
        let g = triangle();
        let r = relax_sdp(&g, 0.1, &SdpParams::default());
        for &(a, b) in g.conflict_edges() {
            assert!((dot(&r.vectors[a], &r.vectors[b]) + 0.5).abs() < 0.05);
        }
        assert!(r.objective.abs() < 1e-3);
        let s = solve_sdp(&ColoringInstance::new(&g, 3, 0.1).unwrap(), &SdpParams::default(), Budget::unlimited()).unwrap();
        assert_eq!(s.cost, 0.0);
        assert!(!s.optimal);
    }

    #[test]
    fn trivial_and_errors() {
        let one = Graph::empty(1);
        let s = solve_sdp(&ColoringInstance::new(&one, 3, 0.1).unwrap(), &SdpParams::default(), Budget::unlimited()).unwrap();
        assert_eq!((s.cost, s.colors.len()), (0.0, 1));
        let k4 = k4();
        assert!(matches!(
            solve_sdp(&ColoringInstance::new(&k4, 4, 0.1).unwrap(), &SdpParams::default(), Budget::unlimited()),
            Err(SolveError::UnsupportedK { k: 4, .. })
        ));
        let s = solve_sdp(&ColoringInstance::new(&k4, 3, 0.1).unwrap(), &SdpParams::default(), Budget::unlimited()).unwrap();
        assert!(s.cost >= 1.0);
    }

    #[test]
    fn objective_matches_discrete_cost_at_integral_points() {
        let g = split_k4();
        let planar = |c: Color| {
            let t = c as f64 * 2.0 * std::f64::consts::PI / 3.0;
            [t.cos(), t.sin(), 0.0]
        };
        for colors in [[0, 1, 2, 1, 0], [0, 1, 2, 1, 1], [0, 0, 0, 0, 0]] {
            let v: Vec<_> = colors.iter().map(|&c| planar(c)).collect();
            let exact = crate::cost::Cost::of(&g, &colors, 0.1).cost;
            assert!((objective(&g, &v, 0.1) - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn grouping_by_threshold() {
        let v = [[1.0, 0.0, 0.0], [0.9, 0.436, 0.0], [-1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        assert_eq!(group_vectors(&v), vec![0, 0, 1, 2]);
    }
}
