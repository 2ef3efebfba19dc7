//! Fixed-template SVG scatter plots of two-dimensional point sets.

use std::fmt::Write as _;

use halton_subseq::halton::{Coord, PointSet};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatterStyle {
    /// Canvas width and height in pixels.
    pub canvas: u32,
    /// Distance from the canvas edge to the unit square.
    pub margin: u32,
    pub radius: f64,
}

impl Default for ScatterStyle {
    fn default() -> Self {
        Self {
            canvas: 520,
            margin: 50,
            radius: 1.8,
        }
    }
}

fn px(c: &Coord) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// One `<circle>` per point inside the unit square, with ticks at multiples
/// of 1/4. Points must be two-dimensional.
pub fn scatter(ps: &PointSet, title: &str, style: &ScatterStyle) -> String {
    assert_eq!(ps.dim(), 2, "scatter plots need two-dimensional points");
    let m = style.margin as f64;
    let side = (style.canvas - 2 * style.margin) as f64;
    let x = |v: f64| m + side * v;
    let y = |v: f64| m + side * (1.0 - v);

    let mut s = String::new();
    let c = style.canvas;
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{c}" height="{c}" viewBox="0 0 {c} {c}">"#
    );
    let _ = writeln!(s, r#"<rect width="{c}" height="{c}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        c as f64 / 2.0,
        m / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{m:.1}" y="{m:.1}" width="{side:.1}" height="{side:.1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<g id="ticks" stroke="black" font-family="sans-serif" font-size="11">"#
    );
    for (i, label) in ["0", "1/4", "1/2", "3/4", "1"].iter().enumerate() {
        let t = i as f64 / 4.0;
        let (tx, ty) = (x(t), y(t));
        let bottom = m + side;
        let _ = writeln!(
            s,
            r#"<line x1="{tx:.1}" y1="{bottom:.1}" x2="{tx:.1}" y2="{:.1}"/>"#,
            bottom + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{tx:.1}" y="{:.1}" text-anchor="middle" stroke="none">{label}</text>"#,
            bottom + 18.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{ty:.1}" x2="{m:.1}" y2="{ty:.1}"/>"#,
            m - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" stroke="none">{label}</text>"#,
            m - 8.0,
            ty + 4.0
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="points" fill="black">"#);
    for p in ps.points() {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{}"/>"#,
            x(px(&p.coords[0])),
            y(px(&p.coords[1])),
            style.radius
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    s
}
