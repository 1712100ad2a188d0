//! Line-oriented text formats for regions, trees, plans and grammar parameters.
//!
//! Every format starts with a `<kind> v1` header. Blank lines and lines
//! starting with `#` are ignored. Floats are written in plain decimal with at
//! most 17 significant digits and read back bit-exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::{Circle, Point, Tolerance};
use crate::grammar::GrammarParams;
use crate::ops::{Anchor, OpKind, OpRecord, Plan};
use crate::reeb::PRGraph;
use crate::region::{HalfConstraint, SSRegion, Side};
use crate::tree::Tree;

/// Shortest plain-decimal form that reads back to the same value; never
/// more than 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    x.to_string()
}

/// Writes `contents` to a sibling temp file, then renames it over `path`.
pub fn write_atomic(path: &std::path::Path, contents: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

/// Content lines with their 1-based numbers, comments and blanks removed.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn expect_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, kind: &str) -> Result<()> {
    match lines.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == [kind, "v1"] => Ok(()),
        Some((n, l)) => Err(Error::parse(n, format!("expected \"{kind} v1\", found {l:?}"))),
        None => Err(Error::parse(1, format!("empty input, expected \"{kind} v1\""))),
    }
}

fn num(line: usize, s: &str) -> Result<f64> {
    let v: f64 = s.parse().map_err(|_| Error::parse(line, format!("bad number {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("non-finite number {s:?}")));
    }
    Ok(v)
}

fn int(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::parse(line, format!("bad integer {s:?}")))
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::KeepInside => "keep_in",
        Side::KeepOutside => "keep_out",
    }
}

fn parse_side(line: usize, s: &str) -> Result<Side> {
    match s {
        "keep_in" => Ok(Side::KeepInside),
        "keep_out" => Ok(Side::KeepOutside),
        _ => Err(Error::parse(line, format!("expected keep_in or keep_out, found {s:?}"))),
    }
}

pub fn write_region(r: &SSRegion) -> String {
    let mut s = String::from("ssregion v1\n");
    let _ = writeln!(s, "tol {} {}", fmt_f64(r.tol.eps_abs), fmt_f64(r.tol.eps_angle));
    for c in &r.constraints {
        let _ = writeln!(
            s,
            "circle {} {} {} {}",
            side_name(c.side),
            fmt_f64(c.circle.center.x),
            fmt_f64(c.circle.center.y),
            fmt_f64(c.circle.radius)
        );
    }
    let _ = writeln!(s, "seed {} {}", fmt_f64(r.seed.x), fmt_f64(r.seed.y));
    s
}

/// Parses a region; `default_tol` applies when the file has no `tol` line.
pub fn parse_region(text: &str, default_tol: Tolerance) -> Result<SSRegion> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "ssregion")?;
    let mut constraints = Vec::new();
    let mut seed = None;
    let mut tol = default_tol;
    for (n, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f[0] {
            "circle" if f.len() == 5 => {
                let side = parse_side(n, f[1])?;
                let c = Circle::new(Point::new(num(n, f[2])?, num(n, f[3])?), num(n, f[4])?)
                    .map_err(|e| Error::parse(n, e.to_string()))?;
                constraints.push(HalfConstraint::new(c, side));
            }
            "seed" if f.len() == 3 => seed = Some(Point::new(num(n, f[1])?, num(n, f[2])?)),
            "tol" if f.len() == 2 || f.len() == 3 => {
                let angle = if f.len() == 3 { num(n, f[2])? } else { default_tol.eps_angle };
                tol = Tolerance::new(num(n, f[1])?, angle).map_err(|e| Error::parse(n, e.to_string()))?;
            }
            _ => return Err(Error::parse(n, format!("unrecognized line {l:?}"))),
        }
    }
    if constraints.is_empty() {
        return Err(Error::parse(1, "region has no circles"));
    }
    let mut r = SSRegion::new(constraints, Point::new(0.0, 0.0), tol);
    r.seed = match seed {
        Some(p) => p,
        None => r.find_seed().unwrap_or(Point::new(0.0, 0.0)),
    };
    Ok(r)
}

pub fn write_tree(t: &Tree) -> String {
    let mut s = format!("tree v1\nvertices {}\n", t.len());
    for (u, v) in t.edges() {
        let _ = writeln!(s, "edge {u} {v}");
    }
    s
}

pub fn parse_tree(text: &str) -> Result<Tree> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "tree")?;
    let mut declared = None;
    let mut edges = Vec::new();
    let mut last = 1;
    for (n, l) in lines {
        last = n;
        let f: Vec<&str> = l.split_whitespace().collect();
        match f[..] {
            ["vertices", k] => declared = Some(int(n, k)?),
            ["edge", u, v] => edges.push((int(n, u)?, int(n, v)?)),
            _ => return Err(Error::parse(n, format!("unrecognized line {l:?}"))),
        }
    }
    let count = declared.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1));
    Tree::from_edges(count, &edges).map_err(|_| Error::parse(last, "edges do not form a tree"))
}

/// Graph in tree format, with vertex annotations as comments.
pub fn write_graph(g: &PRGraph) -> String {
    let mut s = String::from(if g.is_tree() { "tree v1\n" } else { "graph v1\n" });
    let _ = writeln!(s, "vertices {}", g.vertices.len());
    for v in &g.vertices {
        let p = v.anchor();
        let _ = writeln!(s, "# vertex {} {} {} {}", v.id, v.kind, fmt_f64(p.x), fmt_f64(p.y));
    }
    let mut edges: Vec<(usize, usize, usize)> = g
        .edges
        .iter()
        .map(|e| (e.endpoints.0.min(e.endpoints.1), e.endpoints.0.max(e.endpoints.1), e.id))
        .collect();
    edges.sort_unstable();
    for (u, v, id) in edges {
        // Addresses exist only for trees; they are what `op --edge` expects.
        if let Ok(a) = g.edge_address(id) {
            let _ = writeln!(s, "# address {a}");
        }
        let _ = writeln!(s, "edge {u} {v}");
    }
    s
}

fn anchor_fields(a: &Anchor) -> String {
    match a {
        Anchor::Mbcc { angle, radius } => format!("angle={} radius={}", fmt_f64(*angle), fmt_f64(*radius)),
        Anchor::Sscc { theta1, theta2, bulge } => format!(
            "theta1={} theta2={} bulge={}",
            fmt_f64(*theta1),
            fmt_f64(*theta2),
            fmt_f64(*bulge)
        ),
    }
}

pub fn write_record(rec: &OpRecord) -> String {
    let mut s = format!(
        "{} host={} edge={} cx={} cy={} r={} side={} {}",
        rec.kind,
        rec.host,
        rec.target_edge,
        fmt_f64(rec.circle.center.x),
        fmt_f64(rec.circle.center.y),
        fmt_f64(rec.circle.radius),
        side_name(rec.side),
        anchor_fields(&rec.anchor)
    );
    if rec.paired {
        s.push_str(" pair=1");
    }
    s
}

pub fn write_plan(plan: &Plan) -> String {
    let mut s = String::from("plan v1\n");
    let t = plan.base.tol;
    let _ = writeln!(s, "tol {} {}", fmt_f64(t.eps_abs), fmt_f64(t.eps_angle));
    for rec in &plan.steps {
        s.push_str(&write_record(rec));
        s.push('\n');
    }
    s
}

pub fn parse_record(n: usize, l: &str) -> Result<OpRecord> {
    let mut parts = l.split_whitespace();
    let kind: OpKind = parts
        .next()
        .unwrap_or_default()
        .parse()
        .map_err(|e: String| Error::parse(n, e))?;
    let mut fields = BTreeMap::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::parse(n, format!("expected name=value, found {p:?}")))?;
        if fields.insert(k, v).is_some() {
            return Err(Error::parse(n, format!("duplicate field {k}")));
        }
    }
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| Error::parse(n, format!("missing field {k}")));
    let circle = Circle::new(
        Point::new(num(n, get("cx")?)?, num(n, get("cy")?)?),
        num(n, get("r")?)?,
    )
    .map_err(|e| Error::parse(n, e.to_string()))?;
    let anchor = if kind == OpKind::Mbcc {
        Anchor::Mbcc {
            angle: num(n, get("angle")?)?,
            radius: num(n, get("radius")?)?,
        }
    } else {
        Anchor::Sscc {
            theta1: num(n, get("theta1")?)?,
            theta2: num(n, get("theta2")?)?,
            bulge: num(n, get("bulge")?)?,
        }
    };
    let paired = match fields.get("pair") {
        None | Some(&"0") => false,
        Some(&"1") => true,
        Some(v) => return Err(Error::parse(n, format!("bad pair flag {v:?}"))),
    };
    Ok(OpRecord {
        kind,
        target_edge: get("edge")?.to_string(),
        host: int(n, get("host")?)?,
        circle,
        side: parse_side(n, get("side")?)?,
        anchor,
        paired,
    })
}

pub fn parse_plan(text: &str, default_tol: Tolerance) -> Result<Plan> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "plan")?;
    let mut tol = default_tol;
    let mut steps = Vec::new();
    for (n, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        if f[0] == "tol" {
            if !steps.is_empty() || f.len() != 3 {
                return Err(Error::parse(n, "tol must precede steps and give two values"));
            }
            tol = Tolerance::new(num(n, f[1])?, num(n, f[2])?).map_err(|e| Error::parse(n, e.to_string()))?;
        } else {
            steps.push(parse_record(n, l)?);
        }
    }
    Ok(Plan {
        base: SSRegion::unit_disk_with(tol),
        steps,
    })
}

pub fn write_params(p: &GrammarParams) -> String {
    let mut s = format!("params v1\nn0 {}\n", p.n0);
    for (a, n) in &p.attach {
        let _ = writeln!(s, "attach {a} {n}");
    }
    for (a, n) in &p.final_counts {
        let _ = writeln!(s, "final {a} {n}");
    }
    s
}

pub fn parse_params(text: &str) -> Result<GrammarParams> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "params")?;
    let mut p = GrammarParams::default();
    let mut seen_n0 = false;
    for (n, l) in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        match f[..] {
            ["n0", k] => {
                p.n0 = int(n, k)?;
                seen_n0 = true;
            }
            ["attach", a, k] => {
                if p.attach.insert(a.to_string(), int(n, k)?).is_some() {
                    return Err(Error::parse(n, format!("duplicate attach {a}")));
                }
            }
            ["final", a, k] => {
                if p.final_counts.insert(a.to_string(), int(n, k)?).is_some() {
                    return Err(Error::parse(n, format!("duplicate final {a}")));
                }
            }
            _ => return Err(Error::parse(n, format!("unrecognized line {l:?}"))),
        }
    }
    if !seen_n0 {
        return Err(Error::parse(1, "missing n0 line"));
    }
    Ok(p)
}
