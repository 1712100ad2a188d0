//! Deterministic SVG pictures of a region and, optionally, its graph.
//!
//! The region is filled gray, its boundary arcs are drawn black, and graph
//! vertices and edges are drawn on top in red.

use std::fmt::Write as _;

use crate::geom::{Axis, Point};
use crate::reeb::PRGraph;
use crate::region::{SSRegion, Side};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderOptions {
    pub width: u32,
    pub height: u32,
    pub stroke: f64,
    pub overlay: bool,
    pub axis: Axis,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width: 640,
            height: 640,
            stroke: 2.0,
            overlay: true,
            axis: Axis::Horizontal,
        }
    }
}

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn arc_path(c: &crate::geom::Circle, start: f64, extent: f64) -> String {
    // Arcs close to a full turn are split so each SVG arc stays well defined.
    let pieces = if extent > std::f64::consts::PI { 2 } else { 1 };
    let step = extent / pieces as f64;
    let p0 = c.point_at(start);
    let mut d = format!("M {} {}", f(p0.x), f(p0.y));
    for k in 1..=pieces {
        let p = c.point_at(start + step * k as f64);
        let _ = write!(d, " A {r} {r} 0 0 1 {} {}", f(p.x), f(p.y), r = f(c.radius));
    }
    d
}

/// Renders the region, with `graph` drawn over it when overlays are enabled.
pub fn render(r: &SSRegion, graph: Option<&PRGraph>, opts: &RenderOptions) -> String {
    let (lo, hi) = r
        .bounding_box()
        .unwrap_or((Point::new(-1.0, -1.0), Point::new(1.0, 1.0)));
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let (x0, y0) = (lo.x - pad, lo.y - pad);
    let (w, h) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let scale = (opts.width as f64 / w).min(opts.height as f64 / h);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        opts.width, opts.height, opts.width, opts.height
    );
    s.push_str("<defs>\n");
    for (j, c) in r.constraints.iter().enumerate() {
        let (bg, fg) = match c.side {
            Side::KeepInside => ("black", "white"),
            Side::KeepOutside => ("white", "black"),
        };
        let _ = writeln!(
            s,
            "<mask id=\"m{j}\" maskUnits=\"userSpaceOnUse\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{bg}\"/><circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fg}\"/></mask>",
            f(x0), f(y0), f(w), f(h),
            f(x0), f(y0), f(w), f(h),
            f(c.circle.center.x), f(c.circle.center.y), f(c.circle.radius)
        );
    }
    s.push_str("</defs>\n");
    let _ = writeln!(
        s,
        "<g transform=\"translate({} {}) scale({} {})\">",
        f(-x0 * scale),
        f(opts.height as f64 + y0 * scale),
        f(scale),
        f(-scale)
    );
    for j in 0..r.len() {
        let _ = write!(s, "<g mask=\"url(#m{j})\">");
    }
    let _ = write!(
        s,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#bbbbbb\"/>",
        f(x0),
        f(y0),
        f(w),
        f(h)
    );
    for _ in 0..r.len() {
        s.push_str("</g>");
    }
    s.push('\n');
    for j in 0..r.len() {
        for arc in r.boundary_arcs(j) {
            let _ = writeln!(
                s,
                "<path d=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\" vector-effect=\"non-scaling-stroke\"/>",
                arc_path(r.circle(j), arc.start, arc.extent()),
                f(opts.stroke)
            );
        }
    }
    if let (Some(g), true) = (graph, opts.overlay) {
        let dot = 2.0 * opts.stroke / scale;
        for e in &g.edges {
            let (sw, iv) = &e.sample;
            let mid = Point::from_axis(g.axis, *sw, iv.mid());
            let a = g.vertices[e.endpoints.0].anchor();
            let b = g.vertices[e.endpoints.1].anchor();
            let _ = writeln!(
                s,
                "<polyline points=\"{},{} {},{} {},{}\" fill=\"none\" stroke=\"#c00000\" stroke-width=\"{}\" vector-effect=\"non-scaling-stroke\"/>",
                f(a.x), f(a.y), f(mid.x), f(mid.y), f(b.x), f(b.y),
                f(0.5 * opts.stroke)
            );
        }
        for v in &g.vertices {
            let p = v.anchor();
            let _ = writeln!(s, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#c00000\"/>", f(p.x), f(p.y), f(dot));
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}
