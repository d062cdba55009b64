//! Deterministic SVG figures on a fixed 1000x1000 canvas.

use std::fmt::Write;

use vinberg_core::geometry::convex_hull_2d;
use vinberg_core::Matrix;

pub const CANVAS: f64 = 1000.0;
const MARGIN: f64 = 50.0;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SvgError {
    #[error("SVG output needs a 2-dimensional chart, got dimension {0}")]
    Dimension(usize),
    #[error("nothing to draw")]
    Empty,
}

/// Conic `y^T a y + 2 b^T y + c = 0` in chart coordinates.
#[derive(Clone, Debug)]
pub struct Conic {
    pub a: Matrix<f64>,
    pub b: Vec<f64>,
    pub c: f64,
}

impl Conic {
    /// Points on the conic when it is an ellipse.
    pub fn ellipse_points(&self, k: usize) -> Option<Vec<[f64; 2]>> {
        let (a11, a12, a22) = (self.a.row(0)[0], self.a.row(0)[1], self.a.row(1)[1]);
        let det = a11 * a22 - a12 * a12;
        if !(det > 0.0) || a11 <= 0.0 {
            return None;
        }
        // Center -a^{-1} b and radius^2 = b^T a^{-1} b - c.
        let inv = [[a22 / det, -a12 / det], [-a12 / det, a11 / det]];
        let (b0, b1) = (self.b[0], self.b[1]);
        let center = [-(inv[0][0] * b0 + inv[0][1] * b1), -(inv[1][0] * b0 + inv[1][1] * b1)];
        let r2 = b0 * (inv[0][0] * b0 + inv[0][1] * b1) + b1 * (inv[1][0] * b0 + inv[1][1] * b1) - self.c;
        if !(r2 > 0.0) {
            return None;
        }
        // Principal axes of a.
        let tr = a11 + a22;
        let disc = ((a11 - a22).powi(2) + 4.0 * a12 * a12).sqrt();
        let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
        let theta = 0.5 * (2.0 * a12).atan2(a11 - a22);
        let (ct, st) = (theta.cos(), theta.sin());
        let (r1, r2_) = ((r2 / l1).sqrt(), (r2 / l2).sqrt());
        Some(
            (0..k)
                .map(|i| {
                    let t = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                    let (u, v) = (r1 * t.cos(), r2_ * t.sin());
                    [center[0] + ct * u - st * v, center[1] + st * u + ct * v]
                })
                .collect(),
        )
    }
}

/// Affine map from a chart bounding box onto the canvas, `y` pointing up.
struct Frame {
    lo: [f64; 2],
    scale: f64,
    offset: [f64; 2],
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a [f64; 2]>) -> Option<Self> {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        if !lo[0].is_finite() || !hi[0].is_finite() {
            return None;
        }
        let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
        let scale = (CANVAS - 2.0 * MARGIN) / span;
        let offset = [
            MARGIN + 0.5 * ((CANVAS - 2.0 * MARGIN) - (hi[0] - lo[0]) * scale),
            MARGIN + 0.5 * ((CANVAS - 2.0 * MARGIN) - (hi[1] - lo[1]) * scale),
        ];
        Some(Frame { lo, scale, offset })
    }

    fn map(&self, p: [f64; 2]) -> [f64; 2] {
        let x = self.offset[0] + (p[0] - self.lo[0]) * self.scale;
        let y = self.offset[1] + (p[1] - self.lo[1]) * self.scale;
        [x, CANVAS - y]
    }

    fn path(&self, pts: &[[f64; 2]], close: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let q = self.map(*p);
            let _ = write!(d, "{}{:.3},{:.3}", if i == 0 { "M" } else { " L" }, q[0], q[1]);
        }
        if close {
            d.push_str(" Z");
        }
        d
    }
}

fn header(out: &mut String, metadata: &str, style: &str) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="0 0 {0} {0}">"#,
        CANVAS as u32
    );
    let _ = writeln!(out, "<metadata>{}</metadata>", escape(metadata));
    let _ = writeln!(out, "<style>\n{style}</style>");
    let _ = writeln!(out, r#"<rect class="background" x="0" y="0" width="{0}" height="{0}"/>"#, CANVAS as u32);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Fill shade for depth `k` out of `n`: dark at the center, light outside.
fn depth_color(k: usize, n: usize) -> String {
    let t = if n == 0 { 0.0 } else { k as f64 / n as f64 };
    let l = (35.0 + 55.0 * t).round() as u32;
    format!("hsl({}, 55%, {l}%)", (210.0 - 40.0 * t).round() as u32)
}

/// Tiles as chart polygons with their depth, the fundamental one first.
pub struct TilingFigure<'a> {
    pub tiles: &'a [(usize, Vec<[f64; 2]>)],
    pub depth: usize,
    pub conic: Option<&'a Conic>,
    /// JSON metadata embedded verbatim (escaped).
    pub metadata: &'a str,
}

pub fn render_tiling(fig: &TilingFigure) -> Result<String, SvgError> {
    if fig.tiles.is_empty() {
        return Err(SvgError::Empty);
    }
    let polys: Vec<Vec<[f64; 2]>> = fig.tiles.iter().map(|(_, vs)| convex_hull_2d(vs)).collect();
    let conic_pts = fig.conic.and_then(|c| c.ellipse_points(360));
    let frame = Frame::fit(polys.iter().flatten().chain(conic_pts.iter().flatten())).ok_or(SvgError::Empty)?;
    let mut style = String::from(
        ".background { fill: white; }\n.tile { stroke: #222; stroke-width: 0.4; stroke-linejoin: round; }\n\
         .fundamental { fill: #e4572e; stroke: black; stroke-width: 1.5; }\n.conic { fill: none; stroke: #111; stroke-width: 1.2; }\n",
    );
    for k in 0..=fig.depth {
        let _ = writeln!(style, ".depth-{k} {{ fill: {}; }}", depth_color(k, fig.depth));
    }
    let mut out = String::new();
    header(&mut out, fig.metadata, &style);
    let _ = writeln!(out, r#"<g id="tiles">"#);
    for ((level, _), poly) in fig.tiles.iter().zip(&polys).skip(1) {
        let _ = writeln!(out, r#"<path class="tile depth-{level}" d="{}"/>"#, frame.path(poly, true));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<path id="fundamental" class="tile fundamental" d="{}"/>"#, frame.path(&polys[0], true));
    if let Some(pts) = &conic_pts {
        let _ = writeln!(out, r#"<path id="conic" class="conic" d="{}"/>"#, frame.path(pts, true));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Point cloud with an optional outline polygon and conic.
pub fn render_points(points: &[[f64; 2]], outline: Option<&[[f64; 2]]>, conic: Option<&Conic>, metadata: &str) -> Result<String, SvgError> {
    if points.is_empty() {
        return Err(SvgError::Empty);
    }
    let conic_pts = conic.and_then(|c| c.ellipse_points(360));
    let outline_pts: Vec<[f64; 2]> = outline.map(|o| o.to_vec()).unwrap_or_default();
    let frame = Frame::fit(points.iter().chain(&outline_pts).chain(conic_pts.iter().flatten())).ok_or(SvgError::Empty)?;
    let style = ".background { fill: white; }\n.point { fill: #1f4e99; }\n.outline { fill: #f2d0c4; stroke: #e4572e; stroke-width: 1.2; }\n\
                 .conic { fill: none; stroke: #111; stroke-width: 1.2; }\n";
    let mut out = String::new();
    header(&mut out, metadata, style);
    if !outline_pts.is_empty() {
        let _ = writeln!(out, r#"<path id="fundamental" class="outline" d="{}"/>"#, frame.path(&convex_hull_2d(&outline_pts), true));
    }
    if let Some(pts) = &conic_pts {
        let _ = writeln!(out, r#"<path id="conic" class="conic" d="{}"/>"#, frame.path(pts, true));
    }
    let _ = writeln!(out, r#"<g id="points">"#);
    for p in points {
        let q = frame.map(*p);
        let _ = writeln!(out, r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="1.6"/>"#, q[0], q[1]);
    }
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_circle() -> Conic {
        Conic { a: Matrix::identity(2), b: vec![0.0, 0.0], c: -1.0 }
    }

    #[test]
    fn ellipse_points_lie_on_the_conic() {
        let c = Conic { a: Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]), b: vec![0.3, -0.2], c: -1.0 };
        for p in c.ellipse_points(64).unwrap() {
            let (x, y) = (p[0], p[1]);
            let v = 2.0 * x * x + x * y + y * y + 2.0 * (0.3 * x - 0.2 * y) - 1.0;
            assert!(v.abs() < 1e-12, "{v}");
        }
        let hyperbola = Conic { a: Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]), b: vec![0.0, 0.0], c: -1.0 };
        assert!(hyperbola.ellipse_points(8).is_none());
    }

    #[test]
    fn single_tile_is_one_path() {
        let tiles = [(0usize, vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])];
        let fig = TilingFigure { tiles: &tiles, depth: 0, conic: None, metadata: "{}" };
        let s = render_tiling(&fig).unwrap();
        assert_eq!(s.matches("<path").count(), 1);
        assert!(s.contains(r#"width="1000" height="1000""#));
        assert_eq!(s, render_tiling(&fig).unwrap());
    }

    #[test]
    fn points_with_conic() {
        let s = render_points(&[[0.0, 0.5], [0.5, 0.0]], None, Some(&unit_circle()), "{\"n\": 2}").unwrap();
        assert_eq!(s.matches("<circle").count(), 2);
        assert!(s.contains(r#"id="conic""#));
        assert!(render_points(&[], None, None, "").is_err());
    }
}
