//! SVG preview of a colored layout.

use std::fmt::Write;

use crate::cost::Color;
use crate::geom::{Axis, Layout};
use crate::stitch::StitchLine;

pub const PALETTE: [&str; 4] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3"];
const UNCOLORED: &str = "#999999";

/// One filled path per feature (y axis pointing up), stitch lines dashed.
pub fn write_svg(layout: &Layout, colors: &[Color], stitch_lines: &[StitchLine]) -> String {
    let mut s = String::new();
    let Some(bb) = layout.bbox() else {
        s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\"></svg>\n");
        return s;
    };
    let margin = ((bb.width().max(bb.height())) / 20).max(1);
    let (x0, y0) = (bb.x_lo as i64 - margin, bb.y_lo as i64 - margin);
    let (w, h) = (bb.width() + 2 * margin, bb.height() + 2 * margin);
    let y_top = y0 + h;
    let stroke = (w.max(h) as f64 / 400.0).max(0.5);
    writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} 0 {w} {h}\">").unwrap();
    writeln!(s, "<rect x=\"{x0}\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>").unwrap();
    for f in &layout.features {
        let fill = colors.get(f.id).map_or(UNCOLORED, |&c| PALETTE[c as usize % PALETTE.len()]);
        let mut d = String::new();
        for r in &f.rects {
            let top = y_top - r.y_hi as i64;
            write!(d, "M{} {}H{}V{}H{}Z", r.x_lo, top, r.x_hi, top + r.height(), r.x_lo).unwrap();
        }
        writeln!(s, "<path id=\"f{}\" d=\"{d}\" fill=\"{fill}\" fill-opacity=\"0.8\" stroke=\"black\" stroke-width=\"{stroke}\"/>", f.id).unwrap();
    }
    for l in stitch_lines {
        let (a, b) = match l.axis {
            Axis::Horizontal => ((l.cut, l.cross_lo), (l.cut, l.cross_hi)),
            Axis::Vertical => ((l.cross_lo, l.cut), (l.cross_hi, l.cut)),
        };
        writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"{}\" stroke-dasharray=\"{} {}\"/>",
            a.0,
            y_top - a.1,
            b.0,
            y_top - b.1,
            2.0 * stroke,
            4.0 * stroke,
            2.0 * stroke
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
