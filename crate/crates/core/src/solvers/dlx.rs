//! Dancing-links search.
//!
//! Coloring is posed as exact cover: one primary column per vertex, one row per
//! `(vertex, color)` choice. Picking a row covers its vertex column. Conflict
//! and stitch costs against already-chosen rows are charged as rows are
//! picked, and a branch is cut once it cannot beat the incumbent. Columns are
//! taken in a fixed breadth-first order from the highest-degree vertex so
//! dense conflicts are met early.

use super::{Budget, ColoringInstance, EarlierEdges, SolveError, Ticker};
use crate::cost::{Color, Solution};

const ROOT: usize = 0;

/// Toroidal doubly-linked sparse 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DlxMatrix {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    /// Column header of each node; headers point to themselves.
    col: Vec<usize>,
    /// Row index of each node (unused for headers).
    row: Vec<usize>,
    size: Vec<usize>,
    n_cols: usize,
}

impl DlxMatrix {
    /// `rows[r]` lists the (0-based) columns of row `r`.
    pub fn new(n_cols: usize, rows: &[Vec<usize>]) -> DlxMatrix {
        let headers = n_cols + 1;
        let mut m = DlxMatrix {
            left: (0..headers).map(|i| if i == 0 { n_cols } else { i - 1 }).collect(),
            right: (0..headers).map(|i| if i == n_cols { 0 } else { i + 1 }).collect(),
            up: (0..headers).collect(),
            down: (0..headers).collect(),
            col: (0..headers).collect(),
            row: vec![usize::MAX; headers],
            size: vec![0; headers],
            n_cols,
        };
        for (r, cols) in rows.iter().enumerate() {
            let mut first: Option<usize> = None;
            for &c in cols {
                assert!(c < n_cols, "column {c} out of range");
                let h = c + 1;
                let x = m.col.len();
                m.col.push(h);
                m.row.push(r);
                // vertical: insert above the header (at the bottom)
                m.up.push(m.up[h]);
                m.down.push(h);
                let above = m.up[h];
                m.down[above] = x;
                m.up[h] = x;
                m.size[h] += 1;
                // horizontal: insert before the first node of the row
                match first {
                    None => {
                        m.left.push(x);
                        m.right.push(x);
                        first = Some(x);
                    }
                    Some(f) => {
                        let last = m.left[f];
                        m.left.push(last);
                        m.right.push(f);
                        m.right[last] = x;
                        m.left[f] = x;
                    }
                }
            }
        }
        m
    }

    /// Header node of 0-based column `c`.
    pub fn header(&self, c: usize) -> usize {
        c + 1
    }

    pub fn column_size(&self, c: usize) -> usize {
        self.size[c + 1]
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn cover(&mut self, h: usize) {
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[h];
        while i != h {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    pub fn uncover(&mut self, h: usize) {
        let mut i = self.up[h];
        while i != h {
            let mut j = self.left[i];
            while j != i {
                self.size[self.col[j]] += 1;
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[h], self.right[h]);
        self.right[l] = h;
        self.left[r] = h;
    }

    fn is_column_active(&self, h: usize) -> bool {
        self.right[self.left[h]] == h
    }

    /// Counts all exact covers by plain Algorithm X (smallest column first).
    pub fn count_exact_covers(&mut self) -> u64 {
        if self.right[ROOT] == ROOT {
            return 1;
        }
        let mut best = self.right[ROOT];
        let mut c = self.right[best];
        while c != ROOT {
            if self.size[c] < self.size[best] {
                best = c;
            }
            c = self.right[c];
        }
        let h = best;
        self.cover(h);
        let mut total = 0;
        let mut r = self.down[h];
        while r != h {
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            total += self.count_exact_covers();
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            r = self.down[r];
        }
        self.uncover(h);
        total
    }
}

struct Search<'a> {
    m: DlxMatrix,
    rows: Vec<(usize, Color)>,
    order: &'a [usize],
    earlier: EarlierEdges,
    alpha: f64,
    colors: Vec<Color>,
    best: Option<(f64, Vec<Color>)>,
    ticker: Ticker,
}

impl Search<'_> {
    fn bound(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    fn search(&mut self, depth: usize, cn: usize, st: usize, used: usize) {
        if self.m.right[ROOT] == ROOT {
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
        let h = self.m.header(v);
        debug_assert!(self.m.is_column_active(h));
        self.m.cover(h);
        let mut r = self.m.down[h];
        while r != h {
            let (rv, c) = self.rows[self.m.row[r]];
            debug_assert_eq!(rv, v);
            // colors beyond the first unused one are symmetric
            if (c as usize) <= used {
                let dc = self.earlier.conflict[v].iter().filter(|&&u| self.colors[u] == c).count();
                let ds = self.earlier.stitch[v].iter().filter(|&&u| self.colors[u] != c).count();
                let (ncn, nst) = (cn + dc, st + ds);
                if (ncn as f64 + self.alpha * nst as f64) < self.bound() {
                    let mut j = self.m.right[r];
                    while j != r {
                        self.m.cover(self.m.col[j]);
                        j = self.m.right[j];
                    }
                    self.colors[v] = c;
                    self.search(depth + 1, ncn, nst, used.max(c as usize + 1));
                    let mut j = self.m.left[r];
                    while j != r {
                        self.m.uncover(self.m.col[j]);
                        j = self.m.left[j];
                    }
                }
            }
            if self.ticker.timed_out {
                break;
            }
            r = self.m.down[r];
        }
        self.m.uncover(h);
    }
}

/// Builds the coloring matrix: row `v * k + c` is vertex `v` taking color `c`.
pub fn coloring_matrix(n: usize, k: usize) -> (DlxMatrix, Vec<(usize, Color)>) {
    let rows: Vec<(usize, Color)> = (0..n).flat_map(|v| (0..k as Color).map(move |c| (v, c))).collect();
    let cols: Vec<Vec<usize>> = rows.iter().map(|&(v, _)| vec![v]).collect();
    (DlxMatrix::new(n, &cols), rows)
}

/// Cost-bounded exact-cover search; optimal unless the budget runs out.
pub fn solve_dlx(instance: &ColoringInstance<'_>, budget: Budget) -> Result<Solution, SolveError> {
    let g = instance.graph;
    if g.n() == 0 {
        return Ok(Solution::empty());
    }
    let order = g.bfs_order_from_max_degree();
    let (m, rows) = coloring_matrix(g.n(), instance.k);
    let mut s = Search {
        m,
        rows,
        order: &order,
        earlier: EarlierEdges::new(g, &order),
        alpha: instance.alpha,
        colors: vec![0; g.n()],
        best: None,
        ticker: Ticker::new(budget),
    };
    s.search(0, 0, 0, 0);
    let optimal = !s.ticker.timed_out;
    let (_, colors) = s.best.ok_or(SolveError::BudgetExceeded)?;
    Ok(Solution::new(g, colors, instance.alpha, optimal))
}
