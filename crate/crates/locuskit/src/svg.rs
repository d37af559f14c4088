//! Deterministic SVG 1.1 rendering of trace results, plus a CSV sample dump.
//!
//! Identical inputs yield byte-identical output: coordinates are formatted
//! with fixed precision, elements are emitted in trace order, and nothing
//! depends on the clock or the platform.

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use locuskit_core::scenario::BranchLabel;
use locuskit_core::trace::TraceResult;

/// Stroke and fill colors per branch label; unlabeled curves render gray.
pub fn label_color(label: BranchLabel) -> &'static str {
    match label {
        BranchLabel::Incircle => "#000000",
        BranchLabel::ExA => "#d62728",
        BranchLabel::ExB => "#2ca02c",
        BranchLabel::ExC => "#1f77b4",
        BranchLabel::None => "#808080",
    }
}

#[derive(Debug, Clone)]
pub struct Style {
    pub width: u32,
    pub height: u32,
    /// Blank border between the frame and the viewport edge, in pixels.
    pub margin: u32,
    /// Radius of isolated-point markers, in pixels.
    pub point_radius: f64,
    pub stroke_width: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style { width: 800, height: 800, margin: 40, point_radius: 3.0, stroke_width: 1.5 }
    }
}

struct Mapper {
    x0: f64,
    y1: f64,
    sx: f64,
    sy: f64,
    margin: f64,
}

impl Mapper {
    fn new(t: &TraceResult, style: &Style) -> Self {
        let (x0, y0, x1, y1) = t.bbox.to_f64();
        let inner_w = (style.width.saturating_sub(2 * style.margin)).max(1) as f64;
        let inner_h = (style.height.saturating_sub(2 * style.margin)).max(1) as f64;
        Mapper {
            x0,
            y1,
            sx: inner_w / (x1 - x0),
            sy: inner_h / (y1 - y0),
            margin: style.margin as f64,
        }
    }

    /// Curve coordinates to pixels; the y axis flips so north is up.
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (self.margin + (x - self.x0) * self.sx, self.margin + (self.y1 - y) * self.sy)
    }
}

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Renders polylines, isolated-point markers, axes, and the bbox frame.
/// An empty trace still gets its frame and axes.
pub fn render(t: &TraceResult, style: &Style) -> String {
    let m = Mapper::new(t, style);
    let (x0, y0, x1, y1) = t.bbox.to_f64();
    let (fx0, fy1) = m.map(x0, y0);
    let (fx1, fy0) = m.map(x1, y1);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        style.width, style.height, style.width, style.height
    );
    let _ = writeln!(
        out,
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\" stroke=\"#222222\" stroke-width=\"1\"/>",
        px(fx0),
        px(fy0),
        px(fx1 - fx0),
        px(fy1 - fy0)
    );
    if x0 < 0.0 && 0.0 < x1 {
        let (ax, _) = m.map(0.0, 0.0);
        let _ = writeln!(
            out,
            "  <line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>",
            px(ax),
            px(fy0),
            px(fy1)
        );
    }
    if y0 < 0.0 && 0.0 < y1 {
        let (_, ay) = m.map(0.0, 0.0);
        let _ = writeln!(
            out,
            "  <line x1=\"{1}\" y1=\"{0}\" x2=\"{2}\" y2=\"{0}\" stroke=\"#bbbbbb\" stroke-width=\"1\"/>",
            px(ay),
            px(fx0),
            px(fx1)
        );
    }

    for (li, line) in t.polylines.iter().enumerate() {
        if line.len() < 2 {
            continue;
        }
        let labels = t.labels.as_ref().map(|all| all[li].as_slice());
        // segment i spans vertices i..=i+1 and takes the label of vertex i;
        // one path per maximal same-label segment run, so adjacent runs
        // share their boundary vertex and classified branches stay connected
        let seg_label = |i: usize| labels.map_or(BranchLabel::None, |l| l[i]);
        let last_seg = line.len() - 1;
        let mut seg = 0;
        while seg < last_seg {
            let run_label = seg_label(seg);
            let mut end = seg + 1;
            while end < last_seg && seg_label(end) == run_label {
                end += 1;
            }
            let mut d = String::new();
            for (i, &(x, y)) in line[seg..=end].iter().enumerate() {
                let (sx, sy) = m.map(x, y);
                let _ = write!(d, "{}{},{}", if i == 0 { "M " } else { " L " }, px(sx), px(sy));
            }
            let _ = writeln!(
                out,
                "  <path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
                d,
                label_color(run_label),
                style.stroke_width
            );
            seg = end;
        }
    }

    for p in &t.isolated_points {
        let (cx, cy) = m.map(p.x.to_f64(), p.y.to_f64());
        let _ = writeln!(
            out,
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#000000\"/>",
            px(cx),
            px(cy),
            style.point_radius
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(t: &TraceResult, style: &Style, path: &Path) -> io::Result<()> {
    std::fs::write(path, render(t, style))
}

/// One `x,y,label` line per polyline vertex, in trace order.
pub fn dump_csv(t: &TraceResult) -> String {
    let mut out = String::new();
    for (li, line) in t.polylines.iter().enumerate() {
        for (vi, &(x, y)) in line.iter().enumerate() {
            let label = t
                .labels
                .as_ref()
                .map_or(BranchLabel::None, |all| all[li][vi]);
            let _ = writeln!(out, "{x},{y},{}", label.as_str());
        }
    }
    out
}
