//! Turns a family tree into a sequence of circle additions realizing it.
//!
//! Every junction of the tree comes from one bite (an MBCC centered on the
//! upper half of the base circle). A bite adds a junction, a leaf and one
//! degree-2 vertex next to the junction; a pair (an SSCC under the bite's
//! window followed by the bite) adds two more degree-2 vertices, one on each
//! side. Which of the two is used per junction is fixed by the parity of the
//! final counts. The remaining degree-2 vertices are added two at a time by
//! SSCCs.
//!
//! The builder follows each unit's path as a list of vertex locations, which
//! stay fixed across later steps, and checks the bookkeeping after every step.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geom::{Axis, Point, Tolerance};
use crate::grammar::{recognize, Certificate, GrammarParams, Unit};
use crate::ops::{self, Before, MbccOptions, OpRecord, Plan, SsccCase, SsccOptions, MATCH_SLACK};
use crate::reeb::{self, compute_pr_graph, Located, PRGraph};
use crate::region::SSRegion;
use crate::tree::Tree;

/// Bites of the root unit are kept this far from the leaves at x = ±1 (before retries).
pub const DEFAULT_MARGIN: f64 = 0.05;
const MAX_RETRIES: usize = 3;
/// Root bites avoid |x| < CENTER_BAND, where pendant slivers get thin.
const CENTER_BAND: f64 = 0.35;

#[derive(Debug, Clone)]
pub struct RealizationResult {
    pub plan: Plan,
    pub region: SSRegion,
    pub graph: PRGraph,
    pub certificate: Certificate,
    pub verified: bool,
    /// Constraint count of the skeleton region built from plain bites only.
    pub skeleton_circles: usize,
}

/// `1 + n0 + sum of attach counts`: circles needed for the bare skeleton.
pub fn skeleton_circle_count(certificate: &Certificate) -> usize {
    1 + certificate.params.n0 + certificate.params.attach.values().sum::<usize>()
}

pub fn verify(region: &SSRegion, t: &Tree) -> Result<bool> {
    let g = compute_pr_graph(region, Axis::Horizontal)?;
    Ok(g.canonical_code()? == t.canonical_code())
}

pub fn realize(t: &Tree) -> Result<RealizationResult> {
    realize_with(t, Tolerance::default())
}

pub fn realize_with(t: &Tree, tol: Tolerance) -> Result<RealizationResult> {
    let certificate = recognize(t)?;
    let base = SSRegion::unit_disk_with(tol);
    let expected = skeleton_circle_count(&certificate);
    let mut margin = DEFAULT_MARGIN;
    let mut last = None;
    for _ in 0..=MAX_RETRIES {
        match attempt(&base, &certificate.params, margin, expected) {
            Ok((plan, region, skeleton_circles)) => {
                let graph = compute_pr_graph(&region, Axis::Horizontal)?;
                if graph.canonical_code()? != t.canonical_code() {
                    return Err(Error::VerificationFailed(format!(
                        "built graph {} differs from target {}",
                        graph.canonical_code()?,
                        t.canonical_code()
                    )));
                }
                return Ok(RealizationResult {
                    plan,
                    region,
                    graph,
                    certificate,
                    verified: true,
                    skeleton_circles,
                });
            }
            Err(e @ Error::GeometricSearchFailed { .. }) => {
                last = Some(e);
                margin *= 2.0;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn attempt(base: &SSRegion, params: &GrammarParams, margin: f64, expected: usize) -> Result<(Plan, SSRegion, usize)> {
    let skeleton = Builder::new(base, margin)?.build_skeleton(params, false)?;
    let skeleton_circles = skeleton.region.len();
    if skeleton_circles != expected {
        return Err(Error::VerificationFailed(format!(
            "skeleton has {skeleton_circles} circles, expected {expected}"
        )));
    }
    let mut b = Builder::new(base, margin)?.build_skeleton(params, true)?;
    b.top_up(params)?;
    Ok((b.plan, b.region, skeleton_circles))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    End,
    Junction,
    Pass,
}

#[derive(Debug, Clone, Copy)]
struct Marker {
    at: Point,
    role: Role,
}

#[derive(Debug, Clone)]
struct PathUnit {
    address: String,
    markers: Vec<Marker>,
}

/// Contributions of one junction to the degree-2 counts of its two unit edges.
fn contribution(left_type: bool, pair: bool) -> (usize, usize) {
    match (left_type, pair) {
        (true, false) => (1, 0),
        (true, true) => (2, 1),
        (false, false) => (0, 1),
        (false, true) => (1, 2),
    }
}

/// Chooses plain bite or pair per junction so that every edge's forced count
/// has the parity of its final count. Returns the choices and forced counts.
fn parity_plan(counts: &[usize], left_type: &[bool]) -> (Vec<bool>, Vec<usize>) {
    let n = left_type.len();
    let mut forced = vec![0; n + 1];
    let mut pairs = Vec::with_capacity(n);
    let mut want_odd = counts[0] % 2 == 1;
    for i in 0..n {
        let pair = left_type[i] != want_odd;
        let (a, b) = contribution(left_type[i], pair);
        forced[i] += a;
        forced[i + 1] += b;
        pairs.push(pair);
        want_odd = (counts[i + 1] + b) % 2 == 1;
    }
    (pairs, forced)
}

fn split(window: (f64, f64), parts: usize) -> Vec<(f64, f64)> {
    let w = (window.1 - window.0) / parts as f64;
    let gap = 0.1 * w;
    (0..parts)
        .map(|i| {
            let a = window.0 + i as f64 * w;
            (a + gap, a + w - gap)
        })
        .collect()
}

struct Builder {
    region: SSRegion,
    graph: PRGraph,
    plan: Plan,
    units: Vec<PathUnit>,
    margin: f64,
}

impl Builder {
    fn new(base: &SSRegion, margin: f64) -> Result<Builder> {
        let graph = reeb::sweep(base, Axis::Horizontal)?;
        let mut ends: Vec<Point> = graph.vertices.iter().map(|v| v.anchor()).collect();
        ends.sort_by(|a, b| a.x.total_cmp(&b.x));
        let markers = ends.into_iter().map(|at| Marker { at, role: Role::End }).collect();
        Ok(Builder {
            region: base.clone(),
            graph,
            plan: Plan::new(base.clone()),
            units: vec![PathUnit {
                address: String::new(),
                markers,
            }],
            margin,
        })
    }

    fn failed(&self, reason: impl std::fmt::Display) -> Error {
        Error::GeometricSearchFailed {
            step: self.plan.steps.len(),
            reason: reason.to_string(),
        }
    }

    fn vertex_of(&self, p: Point) -> Result<usize> {
        self.graph
            .vertex_at(p, MATCH_SLACK)
            .ok_or_else(|| Error::VerificationFailed(format!("lost track of vertex at {p}")))
    }

    /// Unit and marker index `i` such that markers `i`, `i + 1` bound `edge`.
    fn edge_slot(&self, edge: usize) -> Result<(usize, usize)> {
        let (u, v) = self.graph.edges[edge].endpoints;
        for (k, unit) in self.units.iter().enumerate() {
            for i in 0..unit.markers.len() - 1 {
                let a = self.vertex_of(unit.markers[i].at)?;
                let b = self.vertex_of(unit.markers[i + 1].at)?;
                if (a, b) == (u, v) || (a, b) == (v, u) {
                    return Ok((k, i));
                }
            }
        }
        Err(Error::VerificationFailed(format!("edge {edge} is on no tracked path")))
    }

    /// Commits a new region, inserting the vertices that appeared on `slot`.
    /// Returns the locations of new junctions together with their leaves;
    /// callers track those leaves and then run `check`.
    fn commit(&mut self, next: SSRegion, records: Vec<OpRecord>, slot: (usize, usize)) -> Result<Vec<(Point, Point)>> {
        let (k, i) = slot;
        let a = self.units[k].markers[i].at;
        let b = self.units[k].markers[i + 1].at;
        let graph = reeb::sweep(&next, Axis::Horizontal)?;
        let ua = graph.vertex_at(a, MATCH_SLACK);
        let ub = graph.vertex_at(b, MATCH_SLACK);
        let (Some(ua), Some(ub)) = (ua, ub) else {
            return Err(Error::VerificationFailed("an existing vertex disappeared".into()));
        };
        let path = tree_path(&graph, ua, ub)
            .ok_or_else(|| Error::VerificationFailed("graph is no longer a tree".into()))?;
        let mut inserted = Vec::new();
        let mut junctions = Vec::new();
        for &w in &path[1..path.len() - 1] {
            let at = graph.vertices[w].anchor();
            let role = match graph.degree(w) {
                3 => {
                    let leaf = graph
                        .adjacency()[w]
                        .iter()
                        .copied()
                        .find(|&x| !path.contains(&x) && graph.degree(x) == 1)
                        .ok_or_else(|| Error::VerificationFailed("new junction has no leaf".into()))?;
                    junctions.push((at, graph.vertices[leaf].anchor()));
                    Role::Junction
                }
                2 => Role::Pass,
                d => return Err(Error::VerificationFailed(format!("new path vertex of degree {d}"))),
            };
            inserted.push(Marker { at, role });
        }
        self.units[k].markers.splice(i + 1..i + 1, inserted);
        self.region = next;
        self.graph = graph;
        self.plan.steps.extend(records);
        Ok(junctions)
    }

    fn check(&self) -> Result<()> {
        if !self.graph.is_tree() {
            return Err(Error::VerificationFailed("intermediate graph is not a tree".into()));
        }
        let mut seen = Vec::new();
        for u in &self.units {
            for m in &u.markers {
                let v = self.vertex_of(m.at)?;
                if !seen.contains(&v) {
                    seen.push(v);
                }
            }
        }
        if seen.len() != self.graph.vertices.len() {
            return Err(Error::VerificationFailed(format!(
                "tracking {} vertices, graph has {}",
                seen.len(),
                self.graph.vertices.len()
            )));
        }
        Ok(())
    }

    /// Edge whose upper boundary is the base circle at abscissa `x`.
    fn edge_under_base(&self, x: f64) -> Result<usize> {
        let p = Point::new(x, (1.0 - x * x).max(0.0).sqrt());
        match reeb::locate(&self.region, &self.graph, p) {
            Ok(Located::Edge { edge, .. }) => Ok(edge),
            _ => Err(self.failed(format!("no edge below the base circle at x = {x}"))),
        }
    }

    fn build_skeleton(mut self, params: &GrammarParams, with_pairs: bool) -> Result<Builder> {
        let units = crate::grammar::units(params).map_err(|m| Error::InvalidParams(format!("missing attach entries {m:?}")))?;
        let mut queue = VecDeque::from([0usize]);
        while let Some(ui) = queue.pop_front() {
            let address = self.units[ui].address.clone();
            let unit: &Unit = units.iter().find(|u| u.address == address).expect("unit exists");
            let n = unit.subdivisions;
            if n == 0 {
                continue;
            }
            let counts: Vec<usize> = unit.edges.iter().map(|e| params.final_counts[&e.address]).collect();
            let root = address.is_empty();
            let left_type: Vec<bool> = (0..n).map(|i| root && i < n / 2).collect();
            let (pairs, _) = parity_plan(&counts, &left_type);
            let windows = if root {
                let k_left = n / 2;
                let mut w = Vec::new();
                if k_left > 0 {
                    w.extend(split((-1.0 + self.margin, -CENTER_BAND), k_left));
                }
                w.extend(split((CENTER_BAND, 1.0 - self.margin), n - k_left));
                w
            } else {
                let (j, l) = (self.units[ui].markers[0].at, self.units[ui].markers[1].at);
                let (lo, hi) = (j.x.min(l.x), j.x.max(l.x));
                let shrink = (3.0 * self.margin).min(0.4) * (hi - lo);
                let mut w = split((lo + shrink, hi - shrink), n);
                if j.x > l.x {
                    w.reverse();
                }
                w
            };
            for i in 0..n {
                let window = windows[i];
                let edge = self.edge_under_base(0.5 * (window.0 + window.1))?;
                let slot = self.edge_slot(edge)?;
                let before = Before::of(&self.region)?;
                let (next, records) = if with_pairs && pairs[i] {
                    let (next, recs, _) = ops::mbssc_pair_on(&self.region, &before, edge, 0.5, Some(window))
                        .map_err(|e| self.failed(e))?;
                    (next, recs.to_vec())
                } else {
                    let opts = MbccOptions {
                        x_window: Some(window),
                        upper_half: true,
                        ..MbccOptions::default()
                    };
                    let (next, rec, _) = ops::mbcc_on(&self.region, &before, edge, &opts).map_err(|e| self.failed(e))?;
                    (next, vec![rec])
                };
                let junctions = self.commit(next, records, slot)?;
                let [(j, leaf)] = junctions[..] else {
                    return Err(Error::VerificationFailed(format!(
                        "bite produced {} junctions",
                        junctions.len()
                    )));
                };
                self.units.push(PathUnit {
                    address: unit.vertex_address(i),
                    markers: vec![Marker { at: j, role: Role::End }, Marker { at: leaf, role: Role::End }],
                });
                queue.push_back(self.units.len() - 1);
                self.check()?;
            }
        }
        Ok(self)
    }

    /// Marker indices delimiting the unit's skeleton edges.
    fn skeleton_stops(&self, ui: usize) -> Vec<usize> {
        self.units[ui]
            .markers
            .iter()
            .enumerate()
            .filter(|(_, m)| m.role != Role::Pass)
            .map(|(i, _)| i)
            .collect()
    }

    fn top_up(&mut self, params: &GrammarParams) -> Result<()> {
        let units = crate::grammar::units(params).map_err(|m| Error::InvalidParams(format!("missing attach entries {m:?}")))?;
        for ui in 0..self.units.len() {
            let address = self.units[ui].address.clone();
            let unit = units.iter().find(|u| u.address == address).expect("unit exists");
            for (k, e) in unit.edges.iter().enumerate() {
                let stops = self.skeleton_stops(ui);
                if stops.len() != unit.edges.len() + 1 {
                    return Err(Error::VerificationFailed(format!(
                        "unit {address:?} has {} skeleton edges, expected {}",
                        stops.len() - 1,
                        unit.edges.len()
                    )));
                }
                let have = stops[k + 1] - stops[k] - 1;
                let want = params.final_counts[&e.address];
                if have > want || !(want - have).is_multiple_of(2) {
                    return Err(Error::VerificationFailed(format!(
                        "edge {} carries {have} forced vertices but needs {want}",
                        e.address
                    )));
                }
                for _ in 0..(want - have) / 2 {
                    self.subdivide(ui, k)?;
                }
            }
        }
        Ok(())
    }

    /// Adds two degree-2 vertices on skeleton edge `k` of unit `ui`, on its widest piece.
    fn subdivide(&mut self, ui: usize, k: usize) -> Result<()> {
        let stops = self.skeleton_stops(ui);
        let mut pieces = Vec::new();
        for i in stops[k]..stops[k + 1] {
            let a = self.vertex_of(self.units[ui].markers[i].at)?;
            let b = self.vertex_of(self.units[ui].markers[i + 1].at)?;
            let e = self
                .graph
                .edge_between(a, b)
                .ok_or_else(|| Error::VerificationFailed("tracked vertices are not adjacent".into()))?;
            let (x0, x1) = self.graph.edges[e].slab;
            pieces.push((x1 - x0, e, i));
        }
        pieces.sort_by(|a, b| b.0.total_cmp(&a.0));
        let before = Before::of(&self.region)?;
        let mut last = String::new();
        for &(_, e, i) in &pieces {
            for case in [SsccCase::A1, SsccCase::B, SsccCase::A2] {
                match ops::sscc_on(&self.region, &before, e, case, &SsccOptions::default(), None) {
                    Ok((next, rec, _)) => {
                        self.commit(next, vec![rec], (ui, i))?;
                        return self.check();
                    }
                    Err(err) => last = err.to_string(),
                }
            }
        }
        Err(self.failed(last))
    }
}

fn tree_path(g: &PRGraph, from: usize, to: usize) -> Option<Vec<usize>> {
    let adj = g.adjacency();
    let mut parent = vec![usize::MAX; adj.len()];
    parent[from] = from;
    let mut q = VecDeque::from([from]);
    while let Some(u) = q.pop_front() {
        for &w in &adj[u] {
            if parent[w] == usize::MAX {
                parent[w] = u;
                q.push_back(w);
            }
        }
    }
    if parent[to] == usize::MAX {
        return None;
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(parent[*path.last().unwrap()]);
    }
    path.reverse();
    Some(path)
}
