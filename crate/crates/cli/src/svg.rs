//! Minimal SVG scenes.
//!
//! A [`Scene`] is plain data in pixel coordinates. It is serialized into the
//! figure's JSON next to the physics numbers and rendered to SVG from the
//! same values, so every number in an SVG file also appears in its JSON.

use std::fmt::Write as _;

use serde::Serialize;

/// Significant digits kept for every coordinate.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Number formatting shared with the JSON writer.
pub fn fmt_num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float serializes")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Element {
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        stroke: &'static str,
        dashed: bool,
    },
    Polyline {
        points: Vec<[f64; 2]>,
        stroke: &'static str,
    },
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        fill: &'static str,
    },
    Text {
        x: f64,
        y: f64,
        content: String,
        anchor: &'static str,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scene {
    pub width: f64,
    pub height: f64,
    pub elements: Vec<Element>,
}

impl Scene {
    pub fn new(width: f64, height: f64) -> Self {
        Scene {
            width,
            height,
            elements: Vec::new(),
        }
    }

    pub fn line(&mut self, from: [f64; 2], to: [f64; 2], stroke: &'static str, dashed: bool) {
        self.elements.push(Element::Line {
            x1: round_sig(from[0]),
            y1: round_sig(from[1]),
            x2: round_sig(to[0]),
            y2: round_sig(to[1]),
            stroke,
            dashed,
        });
    }

    pub fn polyline(&mut self, points: &[[f64; 2]], stroke: &'static str) {
        let points = points
            .iter()
            .map(|p| [round_sig(p[0]), round_sig(p[1])])
            .collect();
        self.elements.push(Element::Polyline { points, stroke });
    }

    pub fn circle(&mut self, center: [f64; 2], r: f64, fill: &'static str) {
        self.elements.push(Element::Circle {
            cx: round_sig(center[0]),
            cy: round_sig(center[1]),
            r: round_sig(r),
            fill,
        });
    }

    pub fn text(&mut self, at: [f64; 2], content: impl Into<String>, anchor: &'static str) {
        self.elements.push(Element::Text {
            x: round_sig(at[0]),
            y: round_sig(at[1]),
            content: content.into(),
            anchor,
        });
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
            w = fmt_num(self.width),
            h = fmt_num(self.height)
        );
        let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for el in &self.elements {
            match el {
                Element::Line {
                    x1,
                    y1,
                    x2,
                    y2,
                    stroke,
                    dashed,
                } => {
                    let dash = if *dashed {
                        r#" stroke-dasharray="4 3""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        out,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}"{dash}/>"#,
                        fmt_num(*x1),
                        fmt_num(*y1),
                        fmt_num(*x2),
                        fmt_num(*y2)
                    );
                }
                Element::Polyline { points, stroke } => {
                    let pts: Vec<String> = points
                        .iter()
                        .map(|p| format!("{},{}", fmt_num(p[0]), fmt_num(p[1])))
                        .collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{}" fill="none" stroke="{stroke}"/>"#,
                        pts.join(" ")
                    );
                }
                Element::Circle { cx, cy, r, fill } => {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{}" cy="{}" r="{}" fill="{fill}"/>"#,
                        fmt_num(*cx),
                        fmt_num(*cy),
                        fmt_num(*r)
                    );
                }
                Element::Text {
                    x,
                    y,
                    content,
                    anchor,
                } => {
                    let _ = writeln!(
                        out,
                        r#"<text x="{}" y="{}" text-anchor="{anchor}">{}</text>"#,
                        fmt_num(*x),
                        fmt_num(*y),
                        escape(content)
                    );
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Affine map from a data window onto a pixel rectangle (y axis flipped).
#[derive(Clone, Copy, Debug)]
pub struct Viewport {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub origin: [f64; 2],
    pub size: [f64; 2],
}

impl Viewport {
    pub fn map(&self, x: f64, y: f64) -> [f64; 2] {
        let u = (x - self.x_range.0) / (self.x_range.1 - self.x_range.0);
        let v = (y - self.y_range.0) / (self.y_range.1 - self.y_range.0);
        [
            self.origin[0] + u * self.size[0],
            self.origin[1] + (1.0 - v) * self.size[1],
        ]
    }

    /// Clips the data-space segment to the window (Liang-Barsky).
    pub fn clip(&self, a: [f64; 2], b: [f64; 2]) -> Option<([f64; 2], [f64; 2])> {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        let checks = [
            (-dx, a[0] - self.x_range.0),
            (dx, self.x_range.1 - a[0]),
            (-dy, a[1] - self.y_range.0),
            (dy, self.y_range.1 - a[1]),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
        (t0 <= t1).then(|| {
            (
                [a[0] + t0 * dx, a[1] + t0 * dy],
                [a[0] + t1 * dx, a[1] + t1 * dy],
            )
        })
    }
}
