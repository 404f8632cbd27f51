//! Flat GDSII stream subset: boundaries in the first structure.

use log::warn;

use super::LayoutIoError;
use crate::cost::Color;
use crate::geom::{decompose_polygon, Feature, Layout, Rect, ShapeMode, DEFAULT_MIN_COLOR_DIST_NM};

pub mod rt {
    pub const HEADER: u8 = 0x00;
    pub const BGNLIB: u8 = 0x01;
    pub const LIBNAME: u8 = 0x02;
    pub const UNITS: u8 = 0x03;
    pub const ENDLIB: u8 = 0x04;
    pub const BGNSTR: u8 = 0x05;
    pub const STRNAME: u8 = 0x06;
    pub const ENDSTR: u8 = 0x07;
    pub const BOUNDARY: u8 = 0x08;
    pub const PATH: u8 = 0x09;
    pub const SREF: u8 = 0x0A;
    pub const AREF: u8 = 0x0B;
    pub const TEXT: u8 = 0x0C;
    pub const LAYER: u8 = 0x0D;
    pub const DATATYPE: u8 = 0x0E;
    pub const XY: u8 = 0x10;
    pub const ENDEL: u8 = 0x11;
    pub const NODE: u8 = 0x15;
    pub const BOX: u8 = 0x2D;
}

pub mod dt {
    pub const NONE: u8 = 0x00;
    pub const INT16: u8 = 0x02;
    pub const INT32: u8 = 0x03;
    pub const REAL64: u8 = 0x05;
    pub const ASCII: u8 = 0x06;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GdsRecord {
    pub record_type: u8,
    pub data_type: u8,
    pub payload: Vec<u8>,
}

impl GdsRecord {
    pub fn new(record_type: u8, data_type: u8, payload: Vec<u8>) -> GdsRecord {
        GdsRecord {
            record_type,
            data_type,
            payload,
        }
    }

    pub fn empty(record_type: u8) -> GdsRecord {
        GdsRecord::new(record_type, dt::NONE, Vec::new())
    }

    pub fn int16(record_type: u8, values: &[i16]) -> GdsRecord {
        GdsRecord::new(record_type, dt::INT16, values.iter().flat_map(|v| v.to_be_bytes()).collect())
    }

    pub fn int32(record_type: u8, values: &[i32]) -> GdsRecord {
        GdsRecord::new(record_type, dt::INT32, values.iter().flat_map(|v| v.to_be_bytes()).collect())
    }

    pub fn real64(record_type: u8, values: &[f64]) -> GdsRecord {
        GdsRecord::new(record_type, dt::REAL64, values.iter().flat_map(|&v| encode_real8(v)).collect())
    }

    /// ASCII payloads are NUL-padded to even length.
    pub fn ascii(record_type: u8, s: &str) -> GdsRecord {
        let mut p = s.as_bytes().to_vec();
        if p.len() % 2 == 1 {
            p.push(0);
        }
        GdsRecord::new(record_type, dt::ASCII, p)
    }

    pub fn len(&self) -> usize {
        4 + self.payload.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payload.is_empty()
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        let len = u16::try_from(self.len()).expect("record fits in 64 KiB");
        out.extend_from_slice(&len.to_be_bytes());
        out.push(self.record_type);
        out.push(self.data_type);
        out.extend_from_slice(&self.payload);
    }

    pub fn i16s(&self) -> Vec<i16> {
        self.payload.chunks_exact(2).map(|c| i16::from_be_bytes([c[0], c[1]])).collect()
    }

    pub fn i32s(&self) -> Vec<i32> {
        self.payload.chunks_exact(4).map(|c| i32::from_be_bytes([c[0], c[1], c[2], c[3]])).collect()
    }

    pub fn reals(&self) -> Vec<f64> {
        self.payload
            .chunks_exact(8)
            .map(|c| decode_real8(c.try_into().expect("8 bytes")))
            .collect()
    }
}

/// Encodes an IBM-style excess-64 base-16 float.
pub fn encode_real8(v: f64) -> [u8; 8] {
    if v == 0.0 || !v.is_finite() {
        return [0; 8];
    }
    let mut m = v.abs();
    let mut e: i32 = 64;
    while m >= 1.0 {
        m /= 16.0;
        e += 1;
    }
    while m < 1.0 / 16.0 {
        m *= 16.0;
        e -= 1;
    }
    let mut mant = (m * (1u64 << 56) as f64).round() as u64;
    if mant >= 1 << 56 {
        mant >>= 4;
        e += 1;
    }
    let e = e.clamp(0, 127) as u8;
    let mut out = [0u8; 8];
    out[0] = if v < 0.0 { 0x80 | e } else { e };
    out[1..].copy_from_slice(&mant.to_be_bytes()[1..]);
    out
}

pub fn decode_real8(b: [u8; 8]) -> f64 {
    let sign = if b[0] & 0x80 != 0 { -1.0 } else { 1.0 };
    let e = (b[0] & 0x7F) as i32 - 64;
    let mut mb = [0u8; 8];
    mb[1..].copy_from_slice(&b[1..]);
    let mant = u64::from_be_bytes(mb) as f64 / (1u64 << 56) as f64;
    sign * mant * 16f64.powi(e)
}

/// Splits a stream into records, stopping after ENDLIB.
pub fn parse_records(bytes: &[u8]) -> Result<Vec<(usize, GdsRecord)>, LayoutIoError> {
    let mut out = Vec::new();
    let mut pos = 0;
    loop {
        if pos == bytes.len() {
            return Err(LayoutIoError::MissingEndlib);
        }
        if bytes.len() - pos < 4 {
            return Err(LayoutIoError::TruncatedRecord { offset: pos });
        }
        let len = u16::from_be_bytes([bytes[pos], bytes[pos + 1]]) as usize;
        if len % 2 == 1 {
            return Err(LayoutIoError::OddRecordLength { offset: pos, length: len });
        }
        if len < 4 {
            return Err(LayoutIoError::MalformedRecord {
                offset: pos,
                reason: format!("record length {len} is below 4"),
            });
        }
        if pos + len > bytes.len() {
            return Err(LayoutIoError::TruncatedRecord { offset: pos });
        }
        let rec = GdsRecord::new(bytes[pos + 2], bytes[pos + 3], bytes[pos + 4..pos + len].to_vec());
        if out.is_empty() && rec.record_type != rt::HEADER {
            return Err(LayoutIoError::BadMagic);
        }
        let end = rec.record_type == rt::ENDLIB;
        out.push((pos, rec));
        pos += len;
        if end {
            return Ok(out);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GdsReadOptions {
    /// Keep only boundaries on this layer; `None` keeps all.
    pub layer: Option<i32>,
    pub shape: ShapeMode,
    pub min_color_dist_nm: i64,
}

impl Default for GdsReadOptions {
    fn default() -> Self {
        GdsReadOptions {
            layer: None,
            shape: ShapeMode::Polygon,
            min_color_dist_nm: DEFAULT_MIN_COLOR_DIST_NM,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdsImport {
    pub layout: Layout,
    /// Unrecognized records and unsupported elements that were skipped.
    pub skipped: usize,
}

enum Element {
    Boundary { layer: Option<i32>, xy: Option<Vec<i32>> },
    Skipped,
}

fn nm_per_db_unit(meters: f64) -> Result<i64, LayoutIoError> {
    let nm = meters * 1e9;
    let r = nm.round();
    if !(r >= 1.0) || (nm - r).abs() > 1e-6 * r.max(1.0) || r > i32::MAX as f64 {
        return Err(LayoutIoError::BadUnits(meters));
    }
    Ok(r as i64)
}

/// Reads boundaries of the first structure on `layer`.
pub fn read_gds(bytes: &[u8], layer: i32) -> Result<Layout, LayoutIoError> {
    Ok(read_gds_with(
        bytes,
        &GdsReadOptions {
            layer: Some(layer),
            ..GdsReadOptions::default()
        },
    )?
    .layout)
}

pub fn read_gds_with(bytes: &[u8], opts: &GdsReadOptions) -> Result<GdsImport, LayoutIoError> {
    let records = parse_records(bytes)?;
    let mut db_unit_nm = 1;
    let mut skipped = 0;
    let mut in_first = false;
    let mut seen_struct = false;
    let mut elem: Option<Element> = None;
    let mut polygons: Vec<(i32, Vec<(i64, i64)>)> = Vec::new();

    let malformed = |offset: usize, reason: &str| LayoutIoError::MalformedRecord {
        offset,
        reason: reason.to_string(),
    };

    for (offset, rec) in &records {
        let offset = *offset;
        if let Some(e) = elem.as_mut() {
            match (rec.record_type, e) {
                (rt::ENDEL, _) => {
                    if let Some(Element::Boundary { layer, xy }) = elem.take() {
                        let layer = layer.ok_or_else(|| malformed(offset, "BOUNDARY without LAYER"))?;
                        let xy = xy.ok_or_else(|| malformed(offset, "BOUNDARY without XY"))?;
                        if opts.layer.is_none_or(|l| l == layer) {
                            let pts = xy
                                .chunks_exact(2)
                                .map(|p| (p[0] as i64 * db_unit_nm, p[1] as i64 * db_unit_nm))
                                .collect();
                            polygons.push((layer, pts));
                        }
                    }
                    elem = None;
                }
                (rt::LAYER, Element::Boundary { layer, .. }) => {
                    let v = rec.i16s();
                    *layer = Some(*v.first().ok_or_else(|| malformed(offset, "empty LAYER"))? as i32);
                }
                (rt::XY, Element::Boundary { xy, .. }) => {
                    if rec.data_type != dt::INT32 || rec.payload.len() % 8 != 0 {
                        return Err(malformed(offset, "XY is not a list of int32 pairs"));
                    }
                    *xy = Some(rec.i32s());
                }
                (rt::ENDSTR | rt::ENDLIB | rt::BGNSTR, _) => return Err(malformed(offset, "element not closed by ENDEL")),
                _ => {}
            }
            continue;
        }
        match rec.record_type {
            rt::HEADER | rt::BGNLIB | rt::LIBNAME | rt::STRNAME | rt::ENDLIB => {}
            rt::UNITS => {
                let r = rec.reals();
                if rec.data_type != dt::REAL64 || r.len() != 2 {
                    return Err(malformed(offset, "UNITS needs two reals"));
                }
                db_unit_nm = nm_per_db_unit(r[1])?;
            }
            rt::BGNSTR => {
                in_first = !seen_struct;
                seen_struct = true;
            }
            rt::ENDSTR => in_first = false,
            rt::BOUNDARY if in_first => elem = Some(Element::Boundary { layer: None, xy: None }),
            rt::SREF if in_first => return Err(LayoutIoError::Hierarchy("SREF")),
            rt::AREF if in_first => return Err(LayoutIoError::Hierarchy("AREF")),
            rt::BOUNDARY | rt::SREF | rt::AREF | rt::PATH | rt::TEXT | rt::NODE | rt::BOX => {
                if in_first {
                    skipped += 1;
                }
                elem = Some(Element::Skipped);
            }
            _ => skipped += 1,
        }
    }
    if skipped > 0 {
        warn!("skipped {skipped} unsupported GDSII records or elements");
    }

    let mut rect_groups = Vec::with_capacity(polygons.len());
    for (layer, pts) in &polygons {
        rect_groups.push(decompose_polygon(pts, *layer)?);
    }
    let layout = match opts.shape {
        ShapeMode::Polygon => {
            let rects: Vec<Rect> = rect_groups.into_iter().flatten().collect();
            Layout::from_rects(&rects, ShapeMode::Polygon, db_unit_nm, opts.min_color_dist_nm)?
        }
        ShapeMode::Rectangle => {
            let features = rect_groups
                .into_iter()
                .zip(&polygons)
                .enumerate()
                .map(|(id, (rects, (layer, _)))| Feature { id, layer: *layer, rects })
                .collect();
            Layout::new(features, db_unit_nm, opts.min_color_dist_nm)?
        }
    };
    Ok(GdsImport { layout, skipped })
}

/// Output layer per color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorMap {
    pub base_layer: i32,
    pub color_to_layer: Vec<i32>,
}

impl ColorMap {
    pub fn new(base_layer: i32, color_to_layer: Vec<i32>) -> Result<ColorMap, LayoutIoError> {
        let mut seen = color_to_layer.clone();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(LayoutIoError::DuplicateLayer(w[0]));
        }
        Ok(ColorMap {
            base_layer,
            color_to_layer,
        })
    }

    /// Color `c` goes to layer `base + c`.
    pub fn sequential(base_layer: i32, k: usize) -> ColorMap {
        ColorMap {
            base_layer,
            color_to_layer: (0..k as i32).map(|c| base_layer + c).collect(),
        }
    }

    pub fn layer_of(&self, c: Color) -> Result<i32, LayoutIoError> {
        self.color_to_layer.get(c as usize).copied().ok_or(LayoutIoError::UnmappedColor(c))
    }
}

fn to_db(v: i32, db_unit_nm: i64) -> Result<i32, LayoutIoError> {
    let v = v as i64;
    if v % db_unit_nm != 0 {
        return Err(LayoutIoError::OffGrid { coord: v, db_unit_nm });
    }
    Ok((v / db_unit_nm) as i32)
}

fn emit(layout: &Layout, layer_of: impl Fn(usize) -> Result<i32, LayoutIoError>) -> Result<Vec<u8>, LayoutIoError> {
    let stamp: [i16; 12] = [2000, 1, 1, 0, 0, 0, 2000, 1, 1, 0, 0, 0];
    let mut recs = vec![
        GdsRecord::int16(rt::HEADER, &[600]),
        GdsRecord::int16(rt::BGNLIB, &stamp),
        GdsRecord::ascii(rt::LIBNAME, "MPLD"),
        GdsRecord::real64(rt::UNITS, &[1e-3, layout.db_unit_nm as f64 * 1e-9]),
        GdsRecord::int16(rt::BGNSTR, &stamp),
        GdsRecord::ascii(rt::STRNAME, "TOP"),
    ];
    let db = layout.db_unit_nm;
    for f in &layout.features {
        let layer = layer_of(f.id)?;
        let layer16 = i16::try_from(layer).map_err(|_| LayoutIoError::LayerOutOfRange(layer))?;
        for r in &f.rects {
            let (x0, y0, x1, y1) = (to_db(r.x_lo, db)?, to_db(r.y_lo, db)?, to_db(r.x_hi, db)?, to_db(r.y_hi, db)?);
            recs.push(GdsRecord::empty(rt::BOUNDARY));
            recs.push(GdsRecord::int16(rt::LAYER, &[layer16]));
            recs.push(GdsRecord::int16(rt::DATATYPE, &[0]));
            recs.push(GdsRecord::int32(rt::XY, &[x0, y0, x1, y0, x1, y1, x0, y1, x0, y0]));
            recs.push(GdsRecord::empty(rt::ENDEL));
        }
    }
    recs.push(GdsRecord::empty(rt::ENDSTR));
    recs.push(GdsRecord::empty(rt::ENDLIB));
    let mut out = Vec::new();
    for r in &recs {
        r.write_to(&mut out);
    }
    Ok(out)
}

/// Writes each feature's rectangles as boundaries on the layer of its color.
pub fn write_gds(layout: &Layout, colors: &[Color], map: &ColorMap) -> Result<Vec<u8>, LayoutIoError> {
    if colors.len() != layout.len() {
        return Err(LayoutIoError::ColorCount {
            expected: layout.len(),
            got: colors.len(),
        });
    }
    emit(layout, |i| map.layer_of(colors[i]))
}

/// Writes the layout uncolored, each feature on its own layer.
pub fn write_layout_gds(layout: &Layout) -> Result<Vec<u8>, LayoutIoError> {
    emit(layout, |i| Ok(layout.features[i].layer))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x0: i64, y0: i64, x1: i64, y1: i64, l: i32) -> Rect {
        Rect::new(x0, y0, x1, y1, l).unwrap()
    }

    fn lib(body: Vec<GdsRecord>) -> Vec<u8> {
        let mut recs = vec![
            GdsRecord::int16(rt::HEADER, &[600]),
            GdsRecord::int16(rt::BGNLIB, &[0; 12]),
            GdsRecord::ascii(rt::LIBNAME, "L"),
            GdsRecord::real64(rt::UNITS, &[1e-3, 1e-9]),
            GdsRecord::int16(rt::BGNSTR, &[0; 12]),
            GdsRecord::ascii(rt::STRNAME, "A"),
        ];
        recs.extend(body);
        recs.push(GdsRecord::empty(rt::ENDSTR));
        recs.push(GdsRecord::empty(rt::ENDLIB));
        let mut out = Vec::new();
        recs.iter().for_each(|r| r.write_to(&mut out));
        out
    }

    fn boundary(layer: i16, xy: &[i32]) -> Vec<GdsRecord> {
        vec![
            GdsRecord::empty(rt::BOUNDARY),
            GdsRecord::int16(rt::LAYER, &[layer]),
            GdsRecord::int16(rt::DATATYPE, &[0]),
            GdsRecord::int32(rt::XY, xy),
            GdsRecord::empty(rt::ENDEL),
        ]
    }

    #[test]
    fn real8_known_encodings() {
        assert_eq!(encode_real8(1.0), [0x41, 0x10, 0, 0, 0, 0, 0, 0]);
        // the f64 nearest 1e-3 fits the 56-bit mantissa exactly
        assert_eq!(encode_real8(1e-3), [0x3E, 0x41, 0x89, 0x37, 0x4B, 0xC6, 0xA7, 0xF0]);
        // the truncated decimal pattern common in other writers still reads back
        assert!((decode_real8([0x3E, 0x41, 0x89, 0x37, 0x4B, 0xC6, 0xA7, 0xEF]) - 1e-3).abs() < 1e-18);
        assert_eq!(encode_real8(1e-9), [0x39, 0x44, 0xB8, 0x2F, 0xA0, 0x9B, 0x5A, 0x54]);
        assert_eq!(encode_real8(-2.0)[0], 0xC1);
        for v in [1.0, 1e-3, 1e-9, 5e-9, -123.25, 0.0] {
            let d = decode_real8(encode_real8(v));
            assert!((d - v).abs() <= v.abs() * 1e-15);
        }
    }

    #[test]
    fn single_rect_round_trip() {
        let l = Layout::from_rects(&[rect(0, 0, 10, 40, 1)], ShapeMode::Polygon, 1, 120).unwrap();
        let bytes = write_layout_gds(&l).unwrap();
        assert_eq!(read_gds(&bytes, 1).unwrap(), l);
    }

    #[test]
    fn colored_output_uses_mapped_layer() {
        let l = Layout::from_rects(&[rect(0, 0, 10, 40, 1)], ShapeMode::Polygon, 1, 120).unwrap();
        let bytes = write_gds(&l, &[0], &ColorMap::sequential(10, 3)).unwrap();
        assert_eq!(read_gds(&bytes, 10).unwrap().len(), 1);
        assert!(read_gds(&bytes, 1).unwrap().is_empty());
        assert_eq!(write_gds(&l, &[3], &ColorMap::sequential(10, 3)), Err(LayoutIoError::UnmappedColor(3)));
        assert!(matches!(ColorMap::new(0, vec![1, 1]), Err(LayoutIoError::DuplicateLayer(1))));
    }

    #[test]
    fn layer_filter() {
        let mut body = boundary(1, &[0, 0, 10, 0, 10, 10, 0, 10, 0, 0]);
        body.extend(boundary(2, &[50, 0, 60, 0, 60, 10, 50, 10, 50, 0]));
        let bytes = lib(body);
        let l = read_gds(&bytes, 1).unwrap();
        assert_eq!(l.features.len(), 1);
        assert_eq!(l.features[0].rects, vec![rect(0, 0, 10, 10, 1)]);
        let all = read_gds_with(&bytes, &GdsReadOptions::default()).unwrap();
        assert_eq!(all.layout.len(), 2);
    }

    #[test]
    fn l_outline_matches_rect_encoding() {
        // closed L loop; the 7th point repeats the first
        let bytes = lib(boundary(1, &[0, 0, 20, 0, 20, 10, 10, 10, 10, 20, 0, 20, 0, 0]));
        let l = read_gds(&bytes, 1).unwrap();
        let expect = Layout::from_rects(&[rect(0, 0, 20, 10, 1), rect(0, 10, 10, 20, 1)], ShapeMode::Polygon, 1, 120).unwrap();
        assert_eq!(l, expect);
        assert_eq!(l.features[0].rects.len(), 2);
    }

    #[test]
    fn units_scale_coordinates() {
        let mut out = Vec::new();
        for r in [
            GdsRecord::int16(rt::HEADER, &[600]),
            GdsRecord::real64(rt::UNITS, &[1e-3, 5e-9]),
            GdsRecord::int16(rt::BGNSTR, &[0; 12]),
        ]
        .into_iter()
        .chain(boundary(1, &[0, 0, 2, 0, 2, 4, 0, 4, 0, 0]))
        .chain([GdsRecord::empty(rt::ENDSTR), GdsRecord::empty(rt::ENDLIB)])
        {
            r.write_to(&mut out);
        }
        let l = read_gds(&out, 1).unwrap();
        assert_eq!(l.db_unit_nm, 5);
        assert_eq!(l.features[0].rects, vec![rect(0, 0, 10, 20, 1)]);
        // writing back keeps the 5 nm grid
        assert_eq!(read_gds(&write_layout_gds(&l).unwrap(), 1).unwrap(), l);
    }

    #[test]
    fn stream_errors() {
        let good = lib(boundary(1, &[0, 0, 10, 0, 10, 10, 0, 10, 0, 0]));
        assert_eq!(read_gds(&good[..good.len() - 2], 1), Err(LayoutIoError::TruncatedRecord { offset: good.len() - 4 }));
        assert_eq!(read_gds(&good[..good.len() - 4], 1), Err(LayoutIoError::MissingEndlib));
        let mut bad = good.clone();
        bad[2] = rt::BGNLIB;
        assert_eq!(read_gds(&bad, 1), Err(LayoutIoError::BadMagic));
        let mut odd = good.clone();
        odd[1] = 7;
        assert!(matches!(read_gds(&odd, 1), Err(LayoutIoError::OddRecordLength { offset: 0, length: 7 })));
        let sref = lib(vec![GdsRecord::empty(rt::SREF), GdsRecord::empty(rt::ENDEL)]);
        assert_eq!(read_gds(&sref, 1), Err(LayoutIoError::Hierarchy("SREF")));
    }

    #[test]
    fn unknown_records_and_elements_are_skipped() {
        let mut body = vec![
            GdsRecord::empty(rt::PATH),
            GdsRecord::int16(rt::LAYER, &[1]),
            GdsRecord::empty(rt::ENDEL),
            GdsRecord::int16(0x3B, &[1]),
        ];
        body.extend(boundary(1, &[0, 0, 10, 0, 10, 10, 0, 10, 0, 0]));
        let r = read_gds_with(&lib(body), &GdsReadOptions::default()).unwrap();
        assert_eq!((r.layout.len(), r.skipped), (1, 2));
    }

    #[test]
    fn only_first_structure_is_read() {
        let mut body = boundary(1, &[0, 0, 10, 0, 10, 10, 0, 10, 0, 0]);
        body.push(GdsRecord::empty(rt::ENDSTR));
        body.push(GdsRecord::int16(rt::BGNSTR, &[0; 12]));
        body.extend(boundary(1, &[50, 0, 60, 0, 60, 10, 50, 10, 50, 0]));
        body.push(GdsRecord::empty(rt::SREF));
        body.push(GdsRecord::empty(rt::ENDEL));
        assert_eq!(read_gds(&lib(body), 1).unwrap().len(), 1);
    }

    #[test]
    fn empty_layout_and_even_records() {
        let l = Layout::new(Vec::new(), 1, 120).unwrap();
        let bytes = write_gds(&l, &[], &ColorMap::sequential(10, 3)).unwrap();
        assert!(read_gds(&bytes, 10).unwrap().is_empty());
        for (_, r) in parse_records(&bytes).unwrap() {
            assert!(r.len() % 2 == 0 && r.len() >= 4);
        }
    }

    #[test]
    fn rectangle_mode_keeps_touching_boundaries_apart() {
        let mut body = boundary(1, &[0, 0, 10, 0, 10, 10, 0, 10, 0, 0]);
        body.extend(boundary(1, &[10, 0, 20, 0, 20, 10, 10, 10, 10, 0]));
        let bytes = lib(body);
        let rect_mode = GdsReadOptions {
            shape: ShapeMode::Rectangle,
            ..GdsReadOptions::default()
        };
        assert_eq!(read_gds_with(&bytes, &rect_mode).unwrap().layout.len(), 2);
        assert_eq!(read_gds(&bytes, 1).unwrap().len(), 1);
    }
}
