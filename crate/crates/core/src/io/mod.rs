//! Layout readers and writers: GDSII, JSON layouts, SVG previews.

use thiserror::Error;

use crate::cost::Color;
use crate::geom::GeomError;

pub mod gds;
pub mod json;
pub mod svg;

pub use gds::{read_gds, read_gds_with, write_gds, write_layout_gds, ColorMap, GdsImport, GdsReadOptions, GdsRecord};
pub use json::{read_layout_json, read_layout_json_with, write_layout_json, JsonReadOptions};
pub use svg::write_svg;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutIoError {
    #[error("truncated GDSII record at byte {offset}")]
    TruncatedRecord { offset: usize },
    #[error("stream does not start with a HEADER record")]
    BadMagic,
    #[error("odd GDSII record length {length} at byte {offset}")]
    OddRecordLength { offset: usize, length: usize },
    #[error("stream ends without ENDLIB")]
    MissingEndlib,
    #[error("malformed record at byte {offset}: {reason}")]
    MalformedRecord { offset: usize, reason: String },
    #[error("hierarchical layouts are not supported ({0} in the top structure)")]
    Hierarchy(&'static str),
    #[error("database unit of {0} m is not a whole number of nanometers")]
    BadUnits(f64),
    #[error("coordinate {coord} nm is not on the {db_unit_nm} nm database grid")]
    OffGrid { coord: i64, db_unit_nm: i64 },
    #[error("layer {0} does not fit in 16 bits")]
    LayerOutOfRange(i32),
    #[error("no output layer for color {0}")]
    UnmappedColor(Color),
    #[error("layer {0} is assigned to more than one color")]
    DuplicateLayer(i32),
    #[error("{got} colors for {expected} features")]
    ColorCount { expected: usize, got: usize },
    #[error("schema violation at {path}: {message}")]
    SchemaViolation { path: String, message: String },
    #[error("minimum coloring distance must be positive, got {0}")]
    NegativeDistance(i64),
    #[error(transparent)]
    Geometry(#[from] GeomError),
}
