//! CSV and SVG writers. All writers return the document as a `String`.

use std::fmt::Write;

use crate::analysis::{CurvatureSample, HexagonFigure};
use crate::geom::{Point, Rect};
use crate::web::LeafPolyline;

/// 17 significant digits, lowercase exponent: `-1.0000000000000000e0`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub const LEAF_HEADER: &str = "foliation,level,arc,x,y";
pub const IMAGE_HEADER: &str = "foliation,level,arc,x,y,image";

fn leaf_rows(out: &mut String, leaf: &LeafPolyline, image: Option<u8>) {
    for (v, arc) in leaf.vertices.iter().zip(&leaf.arc) {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            leaf.foliation,
            fmt_float(leaf.level),
            fmt_float(*arc),
            fmt_float(v.x),
            fmt_float(v.y)
        );
        if let Some(flag) = image {
            let _ = write!(out, ",{flag}");
        }
        out.push('\n');
    }
}

/// One vertex per row under [`LEAF_HEADER`].
pub fn leaves_csv(leaves: &[LeafPolyline]) -> String {
    let mut out = format!("{LEAF_HEADER}\n");
    for leaf in leaves {
        leaf_rows(&mut out, leaf, None);
    }
    out
}

/// Originals (`image = 0`) followed by their images (`image = 1`).
pub fn leaves_with_images_csv(leaves: &[LeafPolyline], images: &[LeafPolyline]) -> String {
    let mut out = format!("{IMAGE_HEADER}\n");
    for leaf in leaves {
        leaf_rows(&mut out, leaf, Some(0));
    }
    for image in images {
        leaf_rows(&mut out, image, Some(1));
    }
    out
}

pub fn curvature_csv(samples: &[CurvatureSample]) -> String {
    let mut out = String::from("x,y,K\n");
    for s in samples {
        let _ = writeln!(out, "{},{},{}", fmt_float(s.point.x), fmt_float(s.point.y), fmt_float(s.k));
    }
    out
}

/// `r,defect` table.
pub fn hexagon_table_csv(figures: &[HexagonFigure]) -> String {
    let mut out = String::from("r,defect\n");
    for f in figures {
        let _ = writeln!(out, "{},{}", fmt_float(f.radius), fmt_float(f.defect));
    }
    out
}

/// `leg,x,y` for `P₀ … P₆`, then a `defect=<value>` summary line.
pub fn hexagon_figure_csv(figure: &HexagonFigure) -> String {
    let mut out = String::from("leg,x,y\n");
    for (i, p) in figure.points.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{}", fmt_float(p.x), fmt_float(p.y));
    }
    let _ = writeln!(out, "defect={}", fmt_float(figure.defect));
    out
}

const PALETTE: [&str; 3] = ["#1f77b4", "#2ca02c", "#d62728"];
const PANEL: f64 = 480.0;
const PAD: f64 = 20.0;

struct Panel {
    bounds: Rect,
    offset_x: f64,
}

impl Panel {
    fn new(bounds: Rect, offset_x: f64) -> Panel {
        Panel { bounds, offset_x }
    }

    /// Uniform scale, y axis up, centered in the square panel.
    fn to_px(&self, p: Point) -> (f64, f64) {
        let b = &self.bounds;
        let inner = PANEL - 2.0 * PAD;
        let s = inner / b.width().max(b.height());
        let (cx, cy) = ((b.x_min + b.x_max) / 2.0, (b.y_min + b.y_max) / 2.0);
        let px = self.offset_x + PANEL / 2.0 + (p.x - cx) * s;
        let py = PANEL / 2.0 - (p.y - cy) * s;
        (px, py)
    }
}

fn bounding_rect(leaves: &[LeafPolyline]) -> Option<Rect> {
    let mut pts = leaves.iter().flat_map(|l| l.vertices.iter());
    let first = pts.next()?;
    let mut r = Rect {
        x_min: first.x,
        x_max: first.x,
        y_min: first.y,
        y_max: first.y,
    };
    for p in pts {
        r.x_min = r.x_min.min(p.x);
        r.x_max = r.x_max.max(p.x);
        r.y_min = r.y_min.min(p.y);
        r.y_max = r.y_max.max(p.y);
    }
    let pad = 1e-9_f64.max(0.02 * r.width().max(r.height()));
    r.x_min -= pad;
    r.x_max += pad;
    r.y_min -= pad;
    r.y_max += pad;
    Some(r)
}

fn polyline(out: &mut String, panel: &Panel, leaf: &LeafPolyline, dashed: bool) {
    let color = PALETTE[(leaf.foliation + 2) % 3];
    let _ = write!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="1.2"{} data-foliation="{}" points=""#,
        if dashed { r#" stroke-dasharray="6 3""# } else { "" },
        leaf.foliation
    );
    for (i, &v) in leaf.vertices.iter().enumerate() {
        let (x, y) = panel.to_px(v);
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.3},{y:.3}");
    }
    out.push_str("\"/>\n");
}

fn frame(out: &mut String, panel: &Panel, title: &str) {
    let (x0, y0) = panel.to_px(Point::new(panel.bounds.x_min, panel.bounds.y_max));
    let (x1, y1) = panel.to_px(Point::new(panel.bounds.x_max, panel.bounds.y_min));
    let _ = writeln!(
        out,
        r##"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="none" stroke="#999999"/>"##,
        x1 - x0,
        y1 - y0
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="14" font-family="sans-serif" font-size="12">{}</text>"#,
        panel.offset_x + PAD,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Leaves drawn solid in the domain box; images, when present, dashed in a
/// second panel fitted to their own extent.
pub fn web_svg(domain: &Rect, leaves: &[LeafPolyline], images: &[LeafPolyline]) -> String {
    let panels = if images.is_empty() { 1.0 } else { 2.0 };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{PANEL}" viewBox="0 0 {w} {PANEL}">"#,
        w = PANEL * panels
    );
    let left = Panel::new(*domain, 0.0);
    frame(&mut out, &left, "leaves");
    for leaf in leaves {
        polyline(&mut out, &left, leaf, false);
    }
    if let Some(bounds) = bounding_rect(images) {
        let right = Panel::new(bounds, PANEL);
        frame(&mut out, &right, "images");
        for image in images {
            polyline(&mut out, &right, image, true);
        }
    }
    out.push_str("</svg>\n");
    out
}
