//! Minimal hand-rolled SVG emission: polylines, circles, axes and labels.
//! Output is a standalone SVG 1.1 document with a viewBox.

use std::fmt::Write as _;

pub struct SvgDoc {
    body: String,
    view: (f64, f64, f64, f64),
}

impl SvgDoc {
    pub fn new(min_x: f64, min_y: f64, width: f64, height: f64) -> Self {
        Self {
            body: String::new(),
            view: (min_x, min_y, width, height),
        }
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        writeln!(
            self.body,
            r#"  <line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" stroke-width="{width}"/>"#
        )
        .unwrap();
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, stroke: &str, width: f64) {
        writeln!(
            self.body,
            r#"  <circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
        )
        .unwrap();
    }

    pub fn path(&mut self, pts: &[[f64; 2]], closed: bool, stroke: &str, width: f64) {
        if pts.is_empty() {
            return;
        }
        let mut d = format!("M {} {}", pts[0][0], pts[0][1]);
        for p in &pts[1..] {
            write!(d, " L {} {}", p[0], p[1]).unwrap();
        }
        if closed {
            d.push_str(" Z");
        }
        writeln!(
            self.body,
            r#"  <path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
        )
        .unwrap();
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, content: &str) {
        writeln!(
            self.body,
            r#"  <text x="{x}" y="{y}" font-size="{size}" font-family="monospace">{content}</text>"#
        )
        .unwrap();
    }

    pub fn finish(self) -> String {
        let (x, y, w, h) = self.view;
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{x} {y} {w} {h}\">\n{}</svg>\n",
            self.body
        )
    }
}

/// Profile-curve plot: unit circle, coordinate axes with the vertical
/// (`f2`) axis emphasized, and the closed curve. Math orientation
/// (`f2` grows upward).
pub fn profile_plot(points: &[[f64; 2]]) -> String {
    let mut doc = SvgDoc::new(-1.15, -1.15, 2.3, 2.3);
    doc.circle(0.0, 0.0, 1.0, "#999999", 0.006);
    doc.line(-1.1, 0.0, 1.1, 0.0, "#bbbbbb", 0.004);
    doc.line(0.0, 1.1, 0.0, -1.1, "#555555", 0.006);
    let flipped: Vec<[f64; 2]> = points.iter().map(|p| [p[0], -p[1]]).collect();
    doc.path(&flipped, true, "#1f46b4", 0.01);
    doc.text(1.0, 0.09, 0.07, "f1");
    doc.text(0.04, -1.02, 0.07, "f2");
    doc.finish()
}

/// Scatter/polyline plot of a planar projection of the traced solution
/// curve, with auto-scaled labeled axes.
pub fn projection_plot(points: &[[f64; 2]], x_label: &str, y_label: &str) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 60.0;
    let mut doc = SvgDoc::new(0.0, 0.0, W, H);
    if points.is_empty() {
        return doc.finish();
    }
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in points {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(p[1]);
        y1 = y1.max(p[1]);
    }
    let pad = |lo: &mut f64, hi: &mut f64| {
        let d = (*hi - *lo).max(1e-12);
        *lo -= 0.05 * d;
        *hi += 0.05 * d;
    };
    pad(&mut x0, &mut x1);
    pad(&mut y0, &mut y1);
    let map = |p: &[f64; 2]| {
        [
            M + (p[0] - x0) / (x1 - x0) * (W - 2.0 * M),
            H - M - (p[1] - y0) / (y1 - y0) * (H - 2.0 * M),
        ]
    };

    doc.line(M, H - M, W - M, H - M, "#333333", 1.0);
    doc.line(M, H - M, M, M, "#333333", 1.0);
    // Zero line for the vertical coordinate when it is in range.
    if y0 < 0.0 && y1 > 0.0 {
        let yz = map(&[x0, 0.0])[1];
        doc.line(M, yz, W - M, yz, "#cccccc", 0.8);
    }
    let mapped: Vec<[f64; 2]> = points.iter().map(map).collect();
    doc.path(&mapped, false, "#b42314", 1.5);

    doc.text(M, H - M + 28.0, 14.0, &format!("{x0:.4}"));
    doc.text(W - M - 40.0, H - M + 28.0, 14.0, &format!("{x1:.4}"));
    doc.text(8.0, H - M, 14.0, &format!("{y0:.4}"));
    doc.text(8.0, M + 6.0, 14.0, &format!("{y1:.4}"));
    doc.text(W / 2.0, H - 14.0, 16.0, x_label);
    doc.text(12.0, H / 2.0, 16.0, y_label);
    doc.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documents_are_single_rooted_with_viewbox() {
        let svg = profile_plot(&[[0.0, 0.2], [0.1, 0.3], [0.0, 0.4]]);
        assert!(svg.starts_with("<?xml"));
        assert_eq!(svg.matches("<svg").count(), 1);
        assert_eq!(svg.matches("</svg>").count(), 1);
        assert!(svg.contains("viewBox=\""));
        let svg2 = projection_plot(&[[1.0, -0.1], [1.1, 0.2]], "T", "H");
        assert!(svg2.contains("viewBox=\""));
    }
}
