//! Circle-addition operations with parameter search and pattern checks.
//!
//! Every operation picks geometric parameters on the boundary arc of one graph
//! edge, shrinks them until the new region is valid and the graph changed as
//! expected, and returns a record that replays to the same circle.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geom::{circle_circle_intersections, Axis, Circle, Point};
use crate::reeb::{self, check_corollary1, check_corollary2, Located, PRGraph};
use crate::region::{HalfConstraint, Location, SSRegion, Side};

pub const DEFAULT_MAX_ITERATIONS: usize = 40;
const MAX_CANDIDATES: usize = 8;
/// Radius or chord halvings considered per anchor.
const MAX_HALVINGS: usize = 16;
/// Vertices of two graphs are matched by singular-point location within this slack.
pub(crate) const MATCH_SLACK: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Mbcc,
    SsccA1,
    SsccA2,
    SsccB,
}

impl OpKind {
    pub fn name(self) -> &'static str {
        match self {
            OpKind::Mbcc => "mbcc",
            OpKind::SsccA1 => "sscc_a1",
            OpKind::SsccA2 => "sscc_a2",
            OpKind::SsccB => "sscc_b",
        }
    }

    pub fn is_sscc(self) -> bool {
        self != OpKind::Mbcc
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OpKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "mbcc" => Ok(OpKind::Mbcc),
            "sscc_a1" => Ok(OpKind::SsccA1),
            "sscc_a2" => Ok(OpKind::SsccA2),
            "sscc_b" => Ok(OpKind::SsccB),
            _ => Err(format!("unknown operation kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SsccCase {
    A1,
    A2,
    B,
}

impl SsccCase {
    pub fn kind(self) -> OpKind {
        match self {
            SsccCase::A1 => OpKind::SsccA1,
            SsccCase::A2 => OpKind::SsccA2,
            SsccCase::B => OpKind::SsccB,
        }
    }

    fn side(self) -> Side {
        match self {
            SsccCase::A2 => Side::KeepInside,
            _ => Side::KeepOutside,
        }
    }

    /// Offset of the new arc midpoint from the chord, in units of the host sagitta.
    fn bulge(self) -> f64 {
        match self {
            SsccCase::A1 => -1.0,
            SsccCase::A2 => 0.5,
            SsccCase::B => 1.5,
        }
    }

    fn host_side(self) -> Side {
        match self {
            SsccCase::B => Side::KeepOutside,
            _ => Side::KeepInside,
        }
    }
}

impl FromStr for SsccCase {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "a1" | "a-1" => Ok(SsccCase::A1),
            "a2" | "a-2" => Ok(SsccCase::A2),
            "b" => Ok(SsccCase::B),
            _ => Err(format!("unknown case {s:?}")),
        }
    }
}

/// Parameters that produced a circle, kept for inspection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    /// Center at `angle` on the host circle, with `radius`.
    Mbcc { angle: f64, radius: f64 },
    /// Circle through the host points at `theta1`, `theta2`; `bulge` is the
    /// signed offset of its arc midpoint from the chord midpoint.
    Sscc {
        theta1: f64,
        theta2: f64,
        bulge: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpRecord {
    pub kind: OpKind,
    /// Address of the target edge in the graph before the step.
    pub target_edge: String,
    pub host: usize,
    pub circle: Circle,
    pub side: Side,
    pub anchor: Anchor,
    /// Part of a pair of MBSSCC additions.
    pub paired: bool,
}

impl OpRecord {
    pub fn constraint(&self) -> HalfConstraint {
        HalfConstraint::new(self.circle, self.side)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpReport {
    pub added_circle: Circle,
    pub new_singular_values: Vec<f64>,
    pub pattern_verified: bool,
    pub search_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub sscc: OpReport,
    pub mbcc: OpReport,
    /// Open x-interval the MBCC values were confined to.
    pub window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub base: SSRegion,
    pub steps: Vec<OpRecord>,
}

impl Plan {
    pub fn new(base: SSRegion) -> Self {
        Plan {
            base,
            steps: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MbccOptions {
    pub x_window: Option<(f64, f64)>,
    pub upper_half: bool,
    pub max_iterations: usize,
}

impl Default for MbccOptions {
    fn default() -> Self {
        MbccOptions {
            x_window: None,
            upper_half: false,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsccOptions {
    pub x_window: Option<(f64, f64)>,
    pub max_iterations: usize,
}

impl Default for SsccOptions {
    fn default() -> Self {
        SsccOptions {
            x_window: None,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

/// A piece of the boundary preimage of an edge: the lower or upper endpoint
/// arc of one slab interval, restricted to an x-range.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Arc {
    pub circle: usize,
    pub lower: bool,
    pub x0: f64,
    pub x1: f64,
    /// Angle on the host circle at `x0`, and signed angular span to `x1`.
    pub theta0: f64,
    pub span: f64,
}

impl Arc {
    pub fn point(&self, host: &Circle, q: f64) -> Point {
        host.point_at(self.theta0 + q * self.span)
    }
}

fn wrap(a: f64) -> f64 {
    let t = a.rem_euclid(std::f64::consts::TAU);
    if t > std::f64::consts::PI {
        t - std::f64::consts::TAU
    } else {
        t
    }
}

fn boundary_point(r: &SSRegion, j: usize, lower: bool, x: f64) -> Point {
    Point::new(x, r.endpoint_at(j, lower, Axis::Horizontal, x, false))
}

/// Boundary arcs of edge `e`, clipped to `window`, widest first.
pub(crate) fn edge_arcs(
    r: &SSRegion,
    g: &PRGraph,
    e: usize,
    window: Option<(f64, f64)>,
) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for &(k, i) in &g.edges[e].pieces {
        let slab = &g.slabs[k];
        let iv = slab.intervals[i];
        let (mut x0, mut x1) = (slab.lo, slab.hi);
        if let Some((a, b)) = window {
            x0 = x0.max(a);
            x1 = x1.min(b);
        }
        if x1 - x0 <= 4.0 * r.tol.eps_abs {
            continue;
        }
        for (lower, circle) in [(true, iv.lo_circle), (false, iv.hi_circle)] {
            let Some(j) = circle else { continue };
            let host = r.circle(j);
            let a = host.angle_of(boundary_point(r, j, lower, x0));
            let m = host.angle_of(boundary_point(r, j, lower, 0.5 * (x0 + x1)));
            let b = host.angle_of(boundary_point(r, j, lower, x1));
            let span = wrap(m - a) + wrap(b - m);
            arcs.push(Arc {
                circle: j,
                lower,
                x0,
                x1,
                theta0: a,
                span,
            });
        }
    }
    arcs.sort_by(|a, b| {
        let la = a.span.abs() * r.circle(a.circle).radius;
        let lb = b.span.abs() * r.circle(b.circle).radius;
        lb.total_cmp(&la).then(a.x0.total_cmp(&b.x0))
    });
    arcs
}

fn van_der_corput(mut i: usize) -> f64 {
    let (mut q, mut denom) = (0.0, 1.0);
    while i > 0 {
        denom *= 2.0;
        q += (i & 1) as f64 / denom;
        i >>= 1;
    }
    q
}

/// Sweep values of vertices in `g` that involve constraint `j`.
fn values_of(g: &PRGraph, j: usize) -> Vec<f64> {
    let mut v: Vec<f64> = g
        .vertices
        .iter()
        .filter(|v| v.involves(j))
        .map(|v| v.sweep)
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

fn separated(new: &[f64], old: &[f64], sep: f64) -> bool {
    new.windows(2).all(|w| w[1] - w[0] > sep)
        && new.iter().all(|a| old.iter().all(|b| (a - b).abs() > sep))
}

pub(crate) struct Before {
    pub h: PRGraph,
    pub v: PRGraph,
}

impl Before {
    pub fn of(r: &SSRegion) -> Result<Before> {
        r.ensure_valid()?;
        Ok(Before {
            h: reeb::sweep(r, Axis::Horizontal)?,
            v: reeb::sweep(r, Axis::Vertical)?,
        })
    }
}

/// Checks a candidate region after adding constraint `j = before.len()`.
/// Returns the new horizontal singular values on success.
pub(crate) fn check_step(
    r: &SSRegion,
    before: &Before,
    next: &SSRegion,
    edge: usize,
    kind: OpKind,
) -> std::result::Result<(Vec<f64>, PRGraph), String> {
    let sep = 1e3 * r.tol.eps_abs;
    let j = r.len();
    let report = next.validate();
    if !report.is_valid() {
        return Err(report.to_string());
    }
    let h = reeb::sweep(next, Axis::Horizontal).map_err(|e| e.to_string())?;
    let v = reeb::sweep(next, Axis::Vertical).map_err(|e| e.to_string())?;
    let ok = match kind {
        OpKind::Mbcc => check_corollary1(&before.h, &h, edge),
        _ => check_corollary2(&before.h, &h, edge),
    };
    if !ok {
        return Err("graph change does not match the expected pattern".into());
    }
    let values = values_of(&h, j);
    let want = if kind == OpKind::Mbcc { 3 } else { 2 };
    let fresh = h.vertices.iter().filter(|v| v.involves(j)).count();
    if values.len() != want || fresh != want {
        return Err(format!("expected {want} new vertices, found {fresh}"));
    }
    if before
        .h
        .vertices
        .iter()
        .any(|old| h.vertex_at(old.anchor(), MATCH_SLACK).is_none())
    {
        return Err("an existing vertex moved".into());
    }
    if !separated(&values, &before.h.criticals(), sep) {
        return Err("new singular values too close to existing ones".into());
    }
    if !separated(&values_of(&v, j), &before.v.criticals(), sep) {
        return Err("new vertical singular values too close to existing ones".into());
    }
    Ok((values, h))
}

fn check_window(r: &SSRegion, window: Option<(f64, f64)>) -> Result<()> {
    if let Some((a, b)) = window {
        let width = b - a;
        if width.is_nan() || width < 4.0 * r.tol.eps_abs {
            return Err(Error::WindowUnsatisfiable(format!(
                "({a}, {b}) is narrower than 4*eps"
            )));
        }
    }
    Ok(())
}

fn maps_into_edges(r: &SSRegion, before: &Before, p: Point, edge: usize) -> bool {
    matches!(reeb::locate(r, &before.h, p), Ok(Located::Edge { edge: e, .. }) if e == edge)
        && matches!(reeb::locate(r, &before.v, p), Ok(Located::Edge { .. }))
}

/// Adds a small KeepOutside circle centered on the boundary arc of `target_edge`.
pub fn mbcc(
    r: &SSRegion,
    target_edge: &str,
    opts: &MbccOptions,
) -> Result<(SSRegion, OpRecord, OpReport)> {
    let before = Before::of(r)?;
    let edge = before.h.resolve_edge_address(target_edge)?;
    mbcc_on(r, &before, edge, opts)
}

pub(crate) fn mbcc_on(
    r: &SSRegion,
    before: &Before,
    edge: usize,
    opts: &MbccOptions,
) -> Result<(SSRegion, OpRecord, OpReport)> {
    check_window(r, opts.x_window)?;
    let address = before.h.edge_address(edge)?;
    let sep = 1e3 * r.tol.eps_abs;
    let mut arcs = edge_arcs(r, &before.h, edge, opts.x_window);
    if opts.upper_half {
        arcs.retain(|a| a.circle == 0);
    }
    if arcs.is_empty() {
        return Err(if opts.x_window.is_some() {
            Error::WindowUnsatisfiable(format!("edge {address} has no boundary arc in the window"))
        } else {
            Error::NoCandidatePoint
        });
    }
    let mut singular: Vec<Point> = before
        .h
        .vertices
        .iter()
        .flat_map(|v| v.singulars.iter().map(|s| s.location))
        .collect();
    singular.extend(
        before
            .v
            .vertices
            .iter()
            .flat_map(|v| v.singulars.iter().map(|s| s.location)),
    );

    let old = level_values(&before.h);
    // Every anchor and radius the search may try, scored by how well the new
    // critical values are predicted to stand apart; the clearest go first.
    let mut trials = Vec::new();
    for i in 0..MAX_CANDIDATES {
        let q = van_der_corput(i + 1);
        for arc in &arcs {
            let host = *r.circle(arc.circle);
            let angle = arc.theta0 + q * arc.span;
            let p = arc.point(&host, q);
            if opts.upper_half && p.y <= 0.0 {
                continue;
            }
            if !maps_into_edges(r, before, p, edge) {
                continue;
            }
            let mut rho = singular.iter().map(|s| s.dist(p)).fold(host.radius, f64::min);
            for (k, c) in r.constraints.iter().enumerate() {
                if k != arc.circle {
                    rho = rho.min(c.circle.signed_dist(p).abs());
                }
            }
            rho *= 0.5;
            // Containment only needs the radius below the slack itself.
            if let Some((a, b)) = opts.x_window {
                rho = rho.min(0.9 * (p.x - a)).min(0.9 * (b - p.x));
            }
            if opts.upper_half {
                rho = rho.min(0.9 * p.y);
            }
            for _ in 0..MAX_HALVINGS {
                if rho <= sep {
                    break;
                }
                let circle = Circle::new(p, rho)?;
                if let Some(xs) = predicted_mbcc_values(r, arc.circle, &circle, opts.x_window) {
                    trials.push((spread(xs, &old).min(rho), arc.circle, angle, circle));
                }
                rho *= 0.5;
            }
        }
    }
    if trials.is_empty() {
        return Err(Error::NoCandidatePoint);
    }
    trials.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut iterations = 0;
    for (_, host, angle, circle) in trials.into_iter().take(opts.max_iterations * MAX_CANDIDATES) {
        iterations += 1;
        let next = r.with_constraint(HalfConstraint::new(circle, Side::KeepOutside));
        let Ok((values, _)) = check_step(r, before, &next, edge, OpKind::Mbcc) else {
            continue;
        };
        if !opts.x_window.is_none_or(|(a, b)| values.iter().all(|&x| x > a && x < b)) {
            continue;
        }
        let record = OpRecord {
            kind: OpKind::Mbcc,
            target_edge: address,
            host,
            circle,
            side: Side::KeepOutside,
            anchor: Anchor::Mbcc {
                angle,
                radius: circle.radius,
            },
            paired: false,
        };
        let report = OpReport {
            added_circle: circle,
            new_singular_values: values,
            pattern_verified: true,
            search_iterations: iterations,
        };
        return Ok((next, record, report));
    }
    Err(Error::SearchBudgetExceeded { iterations })
}

/// Critical sweep values of the current graph.
fn level_values(g: &PRGraph) -> Vec<f64> {
    g.levels.iter().map(|l| l.value).collect()
}

/// Smallest gap among `xs` and between `xs` and `old`.
fn spread(mut xs: Vec<f64>, old: &[f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let inner = xs.windows(2).map(|w| w[1] - w[0]);
    let outer = xs.iter().flat_map(|x| old.iter().map(move |o| (x - o).abs()));
    inner.chain(outer).fold(f64::INFINITY, f64::min)
}

/// Sweep values a bite `circle` on host `j` should create: its two crossings
/// with the host and its extreme points on the allowed side of the host.
/// `None` when it does not cross the host or leaves the window.
fn predicted_mbcc_values(r: &SSRegion, j: usize, circle: &Circle, window: Option<(f64, f64)>) -> Option<Vec<f64>> {
    let pts = circle_circle_intersections(r.circle(j), circle, &r.tol).ok()?.points();
    if pts.len() != 2 {
        return None;
    }
    let mut xs: Vec<f64> = pts.iter().map(|p| p.x).collect();
    for dx in [-circle.radius, circle.radius] {
        let e = Point::new(circle.center.x + dx, circle.center.y);
        if r.constraints[j].value(e) > 0.0 {
            xs.push(e.x);
        }
    }
    match window {
        Some((a, b)) if !xs.iter().all(|&x| x > a && x < b) => None,
        _ => Some(xs),
    }
}

/// Circle through `p1`, `p2` whose arc midpoint sits `t` along `u` from the chord midpoint `m`.
fn circle_through(m: Point, u: (f64, f64), half_chord: f64, t: f64) -> Result<Circle> {
    let c = (t * t - half_chord * half_chord) / (2.0 * t);
    let center = Point::new(m.x + c * u.0, m.y + c * u.1);
    Circle::new(center, (t - c).abs())
}

/// Cuts (or intersects) the region with a circle through two close points of
/// one boundary arc of `target_edge`.
pub fn sscc(
    r: &SSRegion,
    target_edge: &str,
    case: SsccCase,
    opts: &SsccOptions,
) -> Result<(SSRegion, OpRecord, OpReport)> {
    let before = Before::of(r)?;
    let edge = before.h.resolve_edge_address(target_edge)?;
    sscc_on(r, &before, edge, case, opts, None)
}

pub(crate) fn sscc_on(
    r: &SSRegion,
    before: &Before,
    edge: usize,
    case: SsccCase,
    opts: &SsccOptions,
    only_lower: Option<bool>,
) -> Result<(SSRegion, OpRecord, OpReport)> {
    check_window(r, opts.x_window)?;
    let address = before.h.edge_address(edge)?;
    let all = edge_arcs(r, &before.h, edge, opts.x_window);
    if all.is_empty() {
        return Err(if opts.x_window.is_some() {
            Error::WindowUnsatisfiable(format!("edge {address} has no boundary arc in the window"))
        } else {
            Error::NoCandidatePair
        });
    }
    let arcs: Vec<Arc> = all
        .into_iter()
        .filter(|a| r.constraints[a.circle].side == case.host_side())
        .filter(|a| only_lower.is_none_or(|l| a.lower == l))
        .collect();
    if arcs.is_empty() {
        let shape = if case == SsccCase::B {
            "concave"
        } else {
            "convex"
        };
        return Err(Error::CaseInapplicable(format!(
            "edge {address} has no {shape} boundary arc"
        )));
    }
    let sep = 1e3 * r.tol.eps_abs;
    let old = level_values(&before.h);
    let mut trials = Vec::new();
    for arc in &arcs {
        let host = *r.circle(arc.circle);
        for i in 0..MAX_CANDIDATES {
            let q = van_der_corput(i + 1);
            let theta_m = arc.theta0 + q * arc.span;
            let u = (theta_m.cos(), theta_m.sin());
            let mut delta = 0.5 * q.min(1.0 - q) * arc.span.abs();
            for _ in 0..MAX_HALVINGS {
                let (t1, t2) = (theta_m - delta, theta_m + delta);
                let (p1, p2) = (host.point_at(t1), host.point_at(t2));
                let half = host.radius * delta.sin();
                let sag = host.radius * (1.0 - delta.cos());
                let m = Point::new(
                    host.center.x + host.radius * delta.cos() * u.0,
                    host.center.y + host.radius * delta.cos() * u.1,
                );
                delta *= 0.5;
                if sag <= 0.0 || half <= sep {
                    break;
                }
                if let Some((a, b)) = opts.x_window {
                    if ![p1.x, p2.x].iter().all(|&x| x > a && x < b) {
                        continue;
                    }
                }
                if !maps_into_edges(r, before, p1, edge) || !maps_into_edges(r, before, p2, edge) {
                    continue;
                }
                let chord_ok = match case {
                    SsccCase::B => r.classify_point(m) == Location::Exterior,
                    _ => r.classify_point(m) == Location::Interior,
                };
                if !chord_ok {
                    continue;
                }
                let bulge = case.bulge() * sag;
                let circle = circle_through(m, u, half, bulge)?;
                let score = spread(vec![p1.x, p2.x], &old).min(half);
                trials.push((score, arc.circle, t1, t2, bulge, circle));
            }
        }
    }
    if trials.is_empty() {
        return Err(Error::NoCandidatePair);
    }
    trials.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut iterations = 0;
    for (_, host, t1, t2, bulge, circle) in trials.into_iter().take(opts.max_iterations * MAX_CANDIDATES) {
        iterations += 1;
        let next = r.with_constraint(HalfConstraint::new(circle, case.side()));
        let Ok((values, _)) = check_step(r, before, &next, edge, case.kind()) else {
            continue;
        };
        if !opts.x_window.is_none_or(|(a, b)| values.iter().all(|&x| x > a && x < b)) {
            continue;
        }
        let record = OpRecord {
            kind: case.kind(),
            target_edge: address,
            host,
            circle,
            side: case.side(),
            anchor: Anchor::Sscc {
                theta1: t1,
                theta2: t2,
                bulge,
            },
            paired: false,
        };
        let report = OpReport {
            added_circle: circle,
            new_singular_values: values,
            pattern_verified: true,
            search_iterations: iterations,
        };
        return Ok((next, record, report));
    }
    Err(Error::SearchBudgetExceeded { iterations })
}

/// SSCC on the lower arc of `sibling_edge`, then an upper-half MBCC whose
/// three values are nested strictly inside the SSCC's two values.
pub fn mbssc_pair(
    r: &SSRegion,
    sibling_edge: &str,
    epsilon_frac: f64,
) -> Result<(SSRegion, [OpRecord; 2], PairReport)> {
    if !(epsilon_frac > 0.0 && epsilon_frac < 1.0) {
        return Err(Error::Precondition(format!(
            "epsilon_frac must lie in (0, 1), got {epsilon_frac}"
        )));
    }
    let before = Before::of(r)?;
    let edge = before.h.resolve_edge_address(sibling_edge)?;
    mbssc_pair_on(r, &before, edge, epsilon_frac, None)
}

pub(crate) fn mbssc_pair_on(
    r: &SSRegion,
    before: &Before,
    edge: usize,
    epsilon_frac: f64,
    x_window: Option<(f64, f64)>,
) -> Result<(SSRegion, [OpRecord; 2], PairReport)> {
    let address = before.h.edge_address(edge)?;
    // Slabs of the edge whose upper arc is the base circle above the axis.
    let arcs = edge_arcs(r, &before.h, edge, x_window);
    let pairs: Vec<(Arc, Arc)> = arcs
        .iter()
        .filter(|up| !up.lower && up.circle == 0)
        .filter(|up| {
            let p = up.point(r.circle(0), 0.5);
            p.y > 0.0
        })
        .filter_map(|up| {
            arcs.iter()
                .find(|lo| lo.lower && lo.x0 == up.x0 && lo.x1 == up.x1)
                .map(|lo| (*up, *lo))
        })
        .collect();
    if pairs.is_empty() {
        return Err(Error::ArcPairNotFound(format!(
            "edge {address} has no slab bounded above by the base circle"
        )));
    }
    let old = level_values(&before.h);
    let mut last = Error::ArcPairNotFound(address.clone());
    let mut best: Option<(f64, SSRegion, [OpRecord; 2], PairReport)> = None;
    for (up, lo) in pairs {
        let case = match r.constraints[lo.circle].side {
            Side::KeepInside => SsccCase::A2,
            Side::KeepOutside => SsccCase::B,
        };
        // The whole slab and its quarters: where the upper arc is steep the
        // MBCC values come out better separated.
        let w = (up.x1 - up.x0) / 4.0;
        let windows = std::iter::once((up.x0, up.x1)).chain((0..4).map(|k| (up.x0 + k as f64 * w, up.x0 + (k + 1) as f64 * w)));
        for sub in windows {
            let sopts = SsccOptions {
                x_window: Some(sub),
                ..SsccOptions::default()
            };
            let (mid, mut rec1, rep1) = match sscc_on(r, before, edge, case, &sopts, Some(true)) {
                Ok(x) => x,
                Err(e) => {
                    last = e;
                    continue;
                }
            };
            let (a21, a22) = (rep1.new_singular_values[0], rep1.new_singular_values[1]);
            let eps = epsilon_frac * (a22 - a21) / 2.0;
            let window = (a21 + eps, a22 - eps);
            let b2 = Before::of(&mid)?;
            let probe = boundary_point(&mid, 0, false, 0.5 * (a21 + a22));
            let Ok(Located::Edge { edge: e2, .. }) = reeb::locate(&mid, &b2.h, probe) else {
                last = Error::ArcPairNotFound("upper arc is not on a single edge".into());
                continue;
            };
            let mopts = MbccOptions {
                x_window: Some(window),
                upper_half: true,
                ..MbccOptions::default()
            };
            match mbcc_on(&mid, &b2, e2, &mopts) {
                Ok((next, mut rec2, rep2)) => {
                    rec1.paired = true;
                    rec2.paired = true;
                    let mut xs = rep1.new_singular_values.clone();
                    xs.extend(&rep2.new_singular_values);
                    let quality = spread(xs, &old).min(rec2.circle.radius);
                    if best.as_ref().is_none_or(|b| quality > b.0) {
                        let report = PairReport {
                            sscc: rep1,
                            mbcc: rep2,
                            window,
                        };
                        best = Some((quality, next, [rec1, rec2], report));
                    }
                }
                Err(e) => last = e,
            }
        }
    }
    match best {
        Some((_, next, recs, report)) => Ok((next, recs, report)),
        None => Err(last),
    }
}

/// Re-applies one recorded step, checking the expected pattern.
pub fn apply_record(r: &SSRegion, rec: &OpRecord, step: usize) -> Result<SSRegion> {
    let diverged = |reason: String| Error::ReplayDivergence { step, reason };
    let before = Before::of(r).map_err(|e| diverged(e.to_string()))?;
    let edge = before
        .h
        .resolve_edge_address(&rec.target_edge)
        .map_err(|e| diverged(e.to_string()))?;
    if rec.host >= r.len() {
        return Err(diverged(format!("host circle {} does not exist", rec.host)));
    }
    let next = r.with_constraint(rec.constraint());
    check_step(r, &before, &next, edge, rec.kind).map_err(diverged)?;
    Ok(next)
}

/// Rebuilds the final region of a plan from its base.
pub fn replay(plan: &Plan) -> Result<SSRegion> {
    let mut r = plan.base.clone();
    for (i, rec) in plan.steps.iter().enumerate() {
        r = apply_record(&r, rec, i)?;
    }
    Ok(r)
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // examples use rounded coordinates
mod tests {
    use super::*;
    use crate::reeb::compute_pr_graph;

    fn only_edge(r: &SSRegion) -> String {
        compute_pr_graph(r, Axis::Horizontal)
            .unwrap()
            .edge_address(0)
            .unwrap()
    }

    #[test]
    fn mbcc_on_disk() {
        let r = SSRegion::unit_disk();
        let (next, rec, rep) = mbcc(&r, &only_edge(&r), &MbccOptions::default()).unwrap();
        assert_eq!(next.len(), 2);
        assert!(rep.pattern_verified);
        assert_eq!(rep.new_singular_values.len(), 3);
        let g = compute_pr_graph(&next, Axis::Horizontal).unwrap();
        assert_eq!((g.vertices.len(), g.edges.len()), (5, 4));
        let replayed = replay(&Plan {
            base: r,
            steps: vec![rec],
        })
        .unwrap();
        assert_eq!(replayed, next);
    }

    #[test]
    fn mbcc_in_narrow_window() {
        let r = SSRegion::unit_disk();
        let opts = MbccOptions {
            x_window: Some((-0.1, 0.1)),
            ..MbccOptions::default()
        };
        let (_, _, rep) = mbcc(&r, &only_edge(&r), &opts).unwrap();
        assert!(rep.new_singular_values.iter().all(|&x| x > -0.1 && x < 0.1));
        let tiny = MbccOptions {
            x_window: Some((0.0, 1e-9)),
            ..MbccOptions::default()
        };
        assert!(matches!(
            mbcc(&r, &only_edge(&r), &tiny),
            Err(Error::WindowUnsatisfiable(_))
        ));
    }

    #[test]
    fn upper_half_mbcc_stays_above_axis() {
        let r = SSRegion::unit_disk();
        let opts = MbccOptions {
            upper_half: true,
            ..MbccOptions::default()
        };
        let (_, rec, _) = mbcc(&r, &only_edge(&r), &opts).unwrap();
        assert!(rec.circle.center.y > 0.0);
        assert!(rec.circle.center.y - rec.circle.radius > 0.0);
    }

    #[test]
    fn sscc_cases_on_disk() {
        let r = SSRegion::unit_disk();
        let e = only_edge(&r);
        for case in [SsccCase::A1, SsccCase::A2] {
            let (next, _, rep) = sscc(&r, &e, case, &SsccOptions::default()).unwrap();
            let g = compute_pr_graph(&next, Axis::Horizontal).unwrap();
            assert_eq!(g.vertices.len(), 4);
            assert!(
                g.vertices
                    .iter()
                    .filter(|v| v.kind == reeb::VertexKind::Pass)
                    .count()
                    == 2
            );
            assert!(rep.new_singular_values[0] < rep.new_singular_values[1]);
        }
        assert!(matches!(
            sscc(&r, &e, SsccCase::B, &SsccOptions::default()),
            Err(Error::CaseInapplicable(_))
        ));
    }

    #[test]
    fn sscc_b_inside_bite() {
        let r = SSRegion::unit_disk().with_constraint(HalfConstraint::new(
            Circle::new(Point::new(0.7071, 0.7071), 0.2).unwrap(),
            Side::KeepOutside,
        ));
        let g = compute_pr_graph(&r, Axis::Horizontal).unwrap();
        let mut done = 0;
        for e in 0..g.edges.len() {
            let addr = g.edge_address(e).unwrap();
            if let Ok((next, _, _)) = sscc(&r, &addr, SsccCase::B, &SsccOptions::default()) {
                let g2 = compute_pr_graph(&next, Axis::Horizontal).unwrap();
                assert!(check_corollary2(&g, &g2, e));
                done += 1;
            }
        }
        assert!(done >= 1);
    }

    #[test]
    fn pair_nests_values() {
        let r = SSRegion::unit_disk().with_constraint(HalfConstraint::new(
            Circle::new(Point::new(0.7071, 0.7071), 0.2).unwrap(),
            Side::KeepOutside,
        ));
        let g = compute_pr_graph(&r, Axis::Horizontal).unwrap();
        // The edge from the left leaf to the junction.
        let e = g.edges.iter().find(|e| e.endpoints.0 == 0).unwrap().id;
        let addr = g.edge_address(e).unwrap();
        let (next, recs, rep) = mbssc_pair(&r, &addr, 0.5).unwrap();
        assert_eq!(next.len(), 4);
        assert!(recs.iter().all(|r| r.paired));
        let (a, b) = rep.window;
        assert!(rep.mbcc.new_singular_values.iter().all(|&x| x > a && x < b));
        let g2 = compute_pr_graph(&next, Axis::Horizontal).unwrap();
        assert_eq!(g2.vertices.len(), g.vertices.len() + 5);
        assert!(matches!(
            mbssc_pair(&r, &addr, 1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn empty_plan_replays_to_base() {
        let plan = Plan::new(SSRegion::unit_disk());
        assert_eq!(replay(&plan).unwrap(), SSRegion::unit_disk());
    }

    #[test]
    fn tampered_record_diverges() {
        let r = SSRegion::unit_disk();
        let (_, mut rec, _) = mbcc(&r, &only_edge(&r), &MbccOptions::default()).unwrap();
        rec.circle = Circle::new(Point::new(0.0, 0.0), 0.3).unwrap();
        let plan = Plan {
            base: r,
            steps: vec![rec],
        };
        assert!(matches!(
            replay(&plan),
            Err(Error::ReplayDivergence { step: 0, .. })
        ));
    }
}
