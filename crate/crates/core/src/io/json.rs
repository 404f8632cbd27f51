//! JSON layout format.
//!
//! ```json
//! {"db_unit_nm": 1, "min_color_dist_nm": 120,
//!  "rects": [[x_lo, y_lo, x_hi, y_hi, layer]],
//!  "polygons": [{"layer": 1, "pts": [[x, y], ...]}]}
//! ```
//! Coordinates are in database units.

use serde::{Deserialize, Serialize};

use super::LayoutIoError;
use crate::geom::{decompose_polygon, Feature, Layout, Rect, ShapeMode, DEFAULT_MIN_COLOR_DIST_NM};

fn one() -> i64 {
    1
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutFile {
    #[serde(default = "one")]
    db_unit_nm: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    min_color_dist_nm: Option<i64>,
    #[serde(default)]
    rects: Vec<[i64; 5]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    polygons: Vec<PolygonEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonEntry {
    layer: i32,
    pts: Vec<[i64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct JsonReadOptions {
    pub shape: ShapeMode,
    /// Replaces the file's `min_color_dist_nm`.
    pub min_color_dist_nm: Option<i64>,
}

pub fn read_layout_json(text: &str) -> Result<Layout, LayoutIoError> {
    read_layout_json_with(text, &JsonReadOptions::default())
}

pub fn read_layout_json_with(text: &str, opts: &JsonReadOptions) -> Result<Layout, LayoutIoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: LayoutFile = serde_path_to_error::deserialize(de).map_err(|e| LayoutIoError::SchemaViolation {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    let dist = opts.min_color_dist_nm.or(file.min_color_dist_nm).unwrap_or(DEFAULT_MIN_COLOR_DIST_NM);
    if dist <= 0 {
        return Err(LayoutIoError::NegativeDistance(dist));
    }
    let db = file.db_unit_nm;
    if db <= 0 {
        return Err(LayoutIoError::SchemaViolation {
            path: "db_unit_nm".into(),
            message: format!("must be positive, got {db}"),
        });
    }
    let scale = |v: i64| v.checked_mul(db).ok_or(crate::geom::GeomError::CoordinateOverflow(v));

    // one group per input shape
    let mut groups: Vec<(i32, Vec<Rect>)> = Vec::new();
    for [x0, y0, x1, y1, layer] in &file.rects {
        let layer = i32::try_from(*layer).map_err(|_| LayoutIoError::SchemaViolation {
            path: "rects".into(),
            message: format!("layer {layer} out of range"),
        })?;
        groups.push((layer, vec![Rect::new(scale(*x0)?, scale(*y0)?, scale(*x1)?, scale(*y1)?, layer)?]));
    }
    for p in &file.polygons {
        let pts = p
            .pts
            .iter()
            .map(|&[x, y]| Ok((scale(x)?, scale(y)?)))
            .collect::<Result<Vec<_>, crate::geom::GeomError>>()?;
        groups.push((p.layer, decompose_polygon(&pts, p.layer)?));
    }
    let layout = match opts.shape {
        ShapeMode::Polygon => {
            let rects: Vec<Rect> = groups.into_iter().flat_map(|g| g.1).collect();
            Layout::from_rects(&rects, ShapeMode::Polygon, db, dist)?
        }
        ShapeMode::Rectangle => {
            let features = groups
                .into_iter()
                .enumerate()
                .map(|(id, (layer, rects))| Feature { id, layer, rects })
                .collect();
            Layout::new(features, db, dist)?
        }
    };
    Ok(layout)
}

/// Writes every feature rectangle to the `rects` list.
pub fn write_layout_json(layout: &Layout) -> Result<String, LayoutIoError> {
    let db = layout.db_unit_nm;
    let to_db = |v: i32| -> Result<i64, LayoutIoError> {
        let v = v as i64;
        if v % db != 0 {
            return Err(LayoutIoError::OffGrid { coord: v, db_unit_nm: db });
        }
        Ok(v / db)
    };
    let rects = layout
        .all_rects()
        .map(|(_, r)| Ok([to_db(r.x_lo)?, to_db(r.y_lo)?, to_db(r.x_hi)?, to_db(r.y_hi)?, r.layer as i64]))
        .collect::<Result<Vec<_>, LayoutIoError>>()?;
    let file = LayoutFile {
        db_unit_nm: db,
        min_color_dist_nm: Some(layout.min_color_dist_nm),
        rects,
        polygons: Vec::new(),
    };
    Ok(serde_json::to_string(&file).expect("layout serializes"))
}
