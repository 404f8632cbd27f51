//! Rectilinear layout geometry.
//!
//! All coordinates are integer nanometers. Features are sets of
//! interior-connected rectangles on one layer; polygons enter the model only
//! through [`decompose_polygon`], which slices them into horizontal slabs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("edge {index} of polygon is not axis-parallel")]
    NonRectilinear { index: usize },
    #[error("polygon loop is self-intersecting")]
    SelfIntersecting,
    #[error("polygon needs at least 4 distinct vertices, got {0}")]
    Degenerate(usize),
    #[error("empty rectangle ({x_lo},{y_lo})-({x_hi},{y_hi})")]
    EmptyRect {
        x_lo: i64,
        y_lo: i64,
        x_hi: i64,
        y_hi: i64,
    },
    #[error("coordinate {0} does not fit in 32 bits")]
    CoordinateOverflow(i64),
    #[error("minimum coloring distance must be positive, got {0}")]
    NonPositiveDistance(i64),
    #[error("database unit must be positive, got {0}")]
    NonPositiveDbUnit(i64),
}

/// Axis-aligned rectangle with `x_lo < x_hi` and `y_lo < y_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub x_lo: i32,
    pub y_lo: i32,
    pub x_hi: i32,
    pub y_hi: i32,
    pub layer: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// Extent measured along x.
    Horizontal,
    /// Extent measured along y.
    Vertical,
}

impl Rect {
    pub fn new(x_lo: i64, y_lo: i64, x_hi: i64, y_hi: i64, layer: i32) -> Result<Rect, GeomError> {
        if x_lo >= x_hi || y_lo >= y_hi {
            return Err(GeomError::EmptyRect {
                x_lo,
                y_lo,
                x_hi,
                y_hi,
            });
        }
        Ok(Rect {
            x_lo: to_i32(x_lo)?,
            y_lo: to_i32(y_lo)?,
            x_hi: to_i32(x_hi)?,
            y_hi: to_i32(y_hi)?,
            layer,
        })
    }

    pub fn width(&self) -> i64 {
        self.x_hi as i64 - self.x_lo as i64
    }

    pub fn height(&self) -> i64 {
        self.y_hi as i64 - self.y_lo as i64
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }

    /// Closed interval covered along `axis`.
    pub fn span(&self, axis: Axis) -> (i64, i64) {
        match axis {
            Axis::Horizontal => (self.x_lo as i64, self.x_hi as i64),
            Axis::Vertical => (self.y_lo as i64, self.y_hi as i64),
        }
    }

    /// Overlap or a shared boundary segment of positive length.
    /// Corner contact alone does not connect.
    pub fn is_connected_to(&self, other: &Rect) -> bool {
        if self.layer != other.layer {
            return false;
        }
        let ox = self.x_hi.min(other.x_hi) as i64 - self.x_lo.max(other.x_lo) as i64;
        let oy = self.y_hi.min(other.y_hi) as i64 - self.y_lo.max(other.y_lo) as i64;
        ox >= 0 && oy >= 0 && (ox > 0 || oy > 0)
    }

    /// Piece of the rectangle with `axis` coordinate in `[lo, hi]`, if non-empty.
    pub fn clip(&self, axis: Axis, lo: i64, hi: i64) -> Option<Rect> {
        let (a, b) = self.span(axis);
        let (a, b) = (a.max(lo), b.min(hi));
        if a >= b {
            return None;
        }
        let mut r = *self;
        match axis {
            Axis::Horizontal => {
                r.x_lo = a as i32;
                r.x_hi = b as i32;
            }
            Axis::Vertical => {
                r.y_lo = a as i32;
                r.y_hi = b as i32;
            }
        }
        Some(r)
    }

    pub fn union_bbox(&self, other: &Rect) -> Rect {
        Rect {
            x_lo: self.x_lo.min(other.x_lo),
            y_lo: self.y_lo.min(other.y_lo),
            x_hi: self.x_hi.max(other.x_hi),
            y_hi: self.y_hi.max(other.y_hi),
            layer: self.layer,
        }
    }
}

fn to_i32(v: i64) -> Result<i32, GeomError> {
    i32::try_from(v).map_err(|_| GeomError::CoordinateOverflow(v))
}

/// Squared Euclidean gap between two rectangles; zero when they touch or overlap.
pub fn gap_sq(a: &Rect, b: &Rect) -> u128 {
    let dx = (a.x_lo.max(b.x_lo) as i64 - a.x_hi.min(b.x_hi) as i64).max(0) as u128;
    let dy = (a.y_lo.max(b.y_lo) as i64 - a.y_hi.min(b.y_hi) as i64).max(0) as u128;
    dx * dx + dy * dy
}

/// One mask-assignable pattern: a connected set of rectangles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub id: usize,
    pub layer: i32,
    pub rects: Vec<Rect>,
}

impl Feature {
    pub fn bbox(&self) -> Rect {
        let mut it = self.rects.iter();
        let first = *it.next().expect("feature without rectangles");
        it.fold(first, |acc, r| acc.union_bbox(r))
    }

    /// The axis of the longer bounding-box side; ties go to horizontal.
    pub fn long_axis(&self) -> Axis {
        let bb = self.bbox();
        if bb.width() >= bb.height() {
            Axis::Horizontal
        } else {
            Axis::Vertical
        }
    }

    pub fn area(&self) -> i64 {
        self.rects.iter().map(Rect::area).sum()
    }

    pub fn gap_sq(&self, other: &Feature) -> u128 {
        let mut best = u128::MAX;
        for a in &self.rects {
            for b in &other.rects {
                best = best.min(gap_sq(a, b));
                if best == 0 {
                    return 0;
                }
            }
        }
        best
    }
}

/// How input shapes become features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ShapeMode {
    /// Each input rectangle is stored directly as its own feature.
    Rectangle,
    /// Polygons are sliced to rectangles and connected rectangles re-united.
    #[default]
    Polygon,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub features: Vec<Feature>,
    /// Nanometers per database unit.
    pub db_unit_nm: i64,
    pub min_color_dist_nm: i64,
}

pub const DEFAULT_MIN_COLOR_DIST_NM: i64 = 120;

impl Layout {
    pub fn new(features: Vec<Feature>, db_unit_nm: i64, min_color_dist_nm: i64) -> Result<Layout, GeomError> {
        if min_color_dist_nm <= 0 {
            return Err(GeomError::NonPositiveDistance(min_color_dist_nm));
        }
        if db_unit_nm <= 0 {
            return Err(GeomError::NonPositiveDbUnit(db_unit_nm));
        }
        let mut features = features;
        for (i, f) in features.iter_mut().enumerate() {
            f.id = i;
        }
        Ok(Layout {
            features,
            db_unit_nm,
            min_color_dist_nm,
        })
    }

    /// Builds features from loose rectangles according to `mode`.
    pub fn from_rects(rects: &[Rect], mode: ShapeMode, db_unit_nm: i64, min_color_dist_nm: i64) -> Result<Layout, GeomError> {
        let features = match mode {
            ShapeMode::Polygon => merge_connected_rects(rects),
            ShapeMode::Rectangle => rects
                .iter()
                .enumerate()
                .map(|(id, r)| Feature {
                    id,
                    layer: r.layer,
                    rects: vec![*r],
                })
                .collect(),
        };
        Layout::new(features, db_unit_nm, min_color_dist_nm)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn all_rects(&self) -> impl Iterator<Item = (usize, &Rect)> {
        self.features.iter().flat_map(|f| f.rects.iter().map(move |r| (f.id, r)))
    }

    pub fn bbox(&self) -> Option<Rect> {
        self.all_rects().map(|(_, r)| *r).reduce(|a, b| a.union_bbox(&b))
    }
}

/// Slices a closed rectilinear loop into maximal horizontal slabs.
///
/// The loop may repeat its first point at the end (GDSII convention) and may
/// run in either orientation. Output is sorted by `(y_lo, x_lo)`.
pub fn decompose_polygon(points: &[(i64, i64)], layer: i32) -> Result<Vec<Rect>, GeomError> {
    let pts = normalize_loop(points)?;
    check_simple(&pts)?;

    let mut ys: Vec<i64> = pts.iter().map(|p| p.1).collect();
    ys.sort_unstable();
    ys.dedup();

    let n = pts.len();
    let verticals: Vec<(i64, i64, i64)> = (0..n)
        .filter_map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % n]);
            (a.0 == b.0).then(|| (a.0, a.1.min(b.1), a.1.max(b.1)))
        })
        .collect();

    let mut out = Vec::new();
    let mut xs = Vec::new();
    for w in ys.windows(2) {
        let (y0, y1) = (w[0], w[1]);
        xs.clear();
        xs.extend(verticals.iter().filter(|v| v.1 <= y0 && v.2 >= y1).map(|v| v.0));
        xs.sort_unstable();
        if xs.len() % 2 != 0 {
            return Err(GeomError::SelfIntersecting);
        }
        for pair in xs.chunks(2) {
            out.push(Rect::new(pair[0], y0, pair[1], y1, layer)?);
        }
    }
    Ok(out)
}

/// Drops the closing repeat, duplicate points and collinear interior points.
fn normalize_loop(points: &[(i64, i64)]) -> Result<Vec<(i64, i64)>, GeomError> {
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for &p in points {
        if pts.last() != Some(&p) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    if pts.len() < 4 {
        return Err(GeomError::Degenerate(pts.len()));
    }
    for i in 0..pts.len() {
        let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
        if a.0 != b.0 && a.1 != b.1 {
            return Err(GeomError::NonRectilinear { index: i });
        }
    }
    // Remove straight-through vertices; a fold-back is a self-intersection.
    loop {
        let n = pts.len();
        if n < 4 {
            return Err(GeomError::Degenerate(n));
        }
        let found = (0..n).find(|&i| {
            let (p, c, q) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            (p.0 == c.0 && c.0 == q.0) || (p.1 == c.1 && c.1 == q.1)
        });
        let Some(i) = found else { break };
        let (p, c, q) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
        let d1 = (c.0 - p.0).signum() + (c.1 - p.1).signum();
        let d2 = (q.0 - c.0).signum() + (q.1 - c.1).signum();
        if d1 != d2 {
            return Err(GeomError::SelfIntersecting);
        }
        pts.remove(i);
    }
    Ok(pts)
}

fn check_simple(pts: &[(i64, i64)]) -> Result<(), GeomError> {
    let n = pts.len();
    let seg = |i: usize| {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        ((a.0.min(b.0), a.1.min(b.1)), (a.0.max(b.0), a.1.max(b.1)))
    };
    for i in 0..n {
        let (a_lo, a_hi) = seg(i);
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (b_lo, b_hi) = seg(j);
            let hit = a_lo.0 <= b_hi.0 && b_lo.0 <= a_hi.0 && a_lo.1 <= b_hi.1 && b_lo.1 <= a_hi.1;
            if hit {
                return Err(GeomError::SelfIntersecting);
            }
        }
    }
    Ok(())
}

/// Groups rectangles into features by overlap or edge contact.
///
/// Feature ids follow the smallest member rectangle index; rectangles inside a
/// feature keep their input order.
pub fn merge_connected_rects(rects: &[Rect]) -> Vec<Feature> {
    let n = rects.len();
    let mut uf = UnionFind::new(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (rects[i].layer, rects[i].x_lo, i));
    for (pos, &i) in order.iter().enumerate() {
        let a = &rects[i];
        for &j in &order[pos + 1..] {
            let b = &rects[j];
            if b.layer != a.layer || b.x_lo > a.x_hi {
                break;
            }
            if a.is_connected_to(b) {
                uf.union(i, j);
            }
        }
    }
    let mut slot = vec![usize::MAX; n];
    let mut features: Vec<Feature> = Vec::new();
    for (i, r) in rects.iter().enumerate() {
        let root = uf.find(i);
        if slot[root] == usize::MAX {
            slot[root] = features.len();
            features.push(Feature {
                id: features.len(),
                layer: r.layer,
                rects: Vec::new(),
            });
        }
        features[slot[root]].rects.push(*r);
    }
    features
}
