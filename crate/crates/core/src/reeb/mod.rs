//! Sweep computation of Poincaré-Reeb graphs.
//!
//! Singular points are clustered into critical levels. Between two levels the
//! fiber has a constant number of intervals (a slab); each slab interval is a
//! piece of an edge. At a level, the limits of the neighbouring slab intervals
//! are grouped by overlap together with the singular points of that level.
//! Groups holding a singular point become vertices; every other group must be
//! a plain pass-through and glues its two slab pieces into one edge.

mod patterns;

pub use patterns::{check_corollary1, check_corollary2};

use std::fmt;

use crate::error::{Error, Result};
pub use crate::geom::Axis;
use crate::geom::Point;
use crate::region::{FiberInterval, Location, SSRegion, SingularKind, SingularPoint};
use crate::tree::{canonical_code_of, CanonicalCode, CanonicalOrder, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Leaf,
    Pass,
    Junction,
    /// Degree 0 or at least 4; never produced by the circle operations.
    Other,
}

impl VertexKind {
    pub fn from_degree(d: usize) -> Self {
        match d {
            1 => VertexKind::Leaf,
            2 => VertexKind::Pass,
            3 => VertexKind::Junction,
            _ => VertexKind::Other,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            VertexKind::Leaf => "leaf",
            VertexKind::Pass => "pass",
            VertexKind::Junction => "junction",
            VertexKind::Other => "other",
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PRVertex {
    pub id: usize,
    pub sweep: f64,
    /// The fiber component `[lo, hi]` collapsed to this vertex.
    pub interval: (f64, f64),
    pub kind: VertexKind,
    pub singulars: Vec<SingularPoint>,
    pub level: usize,
}

impl PRVertex {
    /// A representative location in the plane.
    pub fn anchor(&self) -> Point {
        self.singulars[0].location
    }

    pub fn involves(&self, j: usize) -> bool {
        self.singulars.iter().any(|s| s.involves(j))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PREdge {
    pub id: usize,
    /// Left (smaller sweep) and right endpoint vertices.
    pub endpoints: (usize, usize),
    /// Open sweep interval covered by the edge.
    pub slab: (f64, f64),
    /// Sweep coordinate and fiber interval of a representative sample.
    pub sample: (f64, FiberInterval),
    /// `(slab index, interval index)` pieces making up the edge.
    pub pieces: Vec<(usize, usize)>,
}

/// A maximal sweep interval with no critical level inside.
#[derive(Debug, Clone, PartialEq)]
pub struct Slab {
    pub lo: f64,
    pub hi: f64,
    /// Fiber intervals at the slab midpoint.
    pub intervals: Vec<FiberInterval>,
    /// Edge owning each interval.
    pub edges: Vec<usize>,
}

impl Slab {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// A cluster of singular values merged into one critical level.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PRGraph {
    pub axis: Axis,
    pub vertices: Vec<PRVertex>,
    pub edges: Vec<PREdge>,
    pub levels: Vec<Level>,
    pub slabs: Vec<Slab>,
}

/// Where a point of the closure lands in the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Located {
    Vertex(usize),
    Edge { edge: usize, interior: bool },
}

impl PRGraph {
    pub fn criticals(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.value).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.endpoints.0 == v) as usize + (e.endpoints.1 == v) as usize)
            .sum()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.endpoints.0].push(e.endpoints.1);
            adj[e.endpoints.1].push(e.endpoints.0);
        }
        adj
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.endpoints.0, e.endpoints.1);
        }
        (0..self.vertices.len())
            .filter(|&v| uf.find(v) == v)
            .count()
    }

    pub fn is_tree(&self) -> bool {
        is_tree(self)
    }

    /// The underlying tree, with vertex ids preserved.
    pub fn to_tree(&self) -> Result<Tree> {
        let edges: Vec<_> = self.edges.iter().map(|e| e.endpoints).collect();
        Tree::from_edges(self.vertices.len(), &edges)
    }

    pub fn canonical_code(&self) -> Result<CanonicalCode> {
        Ok(self.to_tree()?.canonical_code())
    }

    /// Canonical code with vertex kinds as labels.
    pub fn labeled_code(&self) -> Result<CanonicalCode> {
        let t = self.to_tree()?;
        let labels: Vec<String> = self
            .vertices
            .iter()
            .map(|v| v.kind.label()[..1].to_string())
            .collect();
        Ok(canonical_code_of(t.adjacency(), Some(&labels)))
    }

    fn canonical_order(&self) -> Result<CanonicalOrder> {
        if !self.is_tree() {
            return Err(Error::NotATree);
        }
        let adj = self.adjacency();
        Ok(CanonicalOrder::new(&adj, |v| {
            (self.vertices[v].sweep, self.vertices[v].interval.0)
        }))
    }

    /// Stable textual address of an edge, independent of internal ids.
    pub fn edge_address(&self, edge: usize) -> Result<String> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::UnknownEdge(edge.to_string()))?;
        self.canonical_order()?
            .edge_address(e.endpoints.0, e.endpoints.1)
            .ok_or_else(|| Error::UnknownEdge(edge.to_string()))
    }

    pub fn resolve_edge_address(&self, address: &str) -> Result<usize> {
        let (a, b) = self
            .canonical_order()?
            .resolve(address)
            .ok_or_else(|| Error::UnknownEdge(address.to_string()))?;
        self.edge_between(a, b)
            .ok_or_else(|| Error::UnknownEdge(address.to_string()))
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edges
            .iter()
            .find(|e| e.endpoints == (a, b) || e.endpoints == (b, a))
            .map(|e| e.id)
    }

    /// Vertex containing a singular point within `slack` of `p`.
    pub fn vertex_at(&self, p: Point, slack: f64) -> Option<usize> {
        self.vertices
            .iter()
            .find(|v| v.singulars.iter().any(|s| s.location.dist(p) <= slack))
            .map(|v| v.id)
    }
}

pub fn is_tree(g: &PRGraph) -> bool {
    !g.vertices.is_empty() && g.vertices.len() == g.edges.len() + 1 && g.component_count() == 1
}

/// Validates the region, then sweeps it.
pub fn compute_pr_graph(r: &SSRegion, axis: Axis) -> Result<PRGraph> {
    r.ensure_valid()?;
    sweep(r, axis)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller root for determinism
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Slack used when deciding whether limit intervals touch at a level.
pub(crate) fn touch_slack(r: &SSRegion) -> f64 {
    100.0 * r.tol.eps_abs
}

fn cluster_levels(sing: &[SingularPoint], eps: f64) -> Vec<(Level, Vec<SingularPoint>)> {
    let mut sorted = sing.to_vec();
    sorted.sort_by(|a, b| {
        a.sweep()
            .total_cmp(&b.sweep())
            .then(a.transverse().total_cmp(&b.transverse()))
    });
    let mut out: Vec<(Level, Vec<SingularPoint>)> = Vec::new();
    for s in sorted {
        let v = s.sweep();
        match out.last_mut() {
            Some((level, members)) if v - level.hi <= 2.0 * eps => {
                level.hi = v;
                members.push(s);
            }
            _ => out.push((
                Level {
                    lo: v,
                    hi: v,
                    value: v,
                },
                vec![s],
            )),
        }
    }
    for (level, members) in &mut out {
        level.value = members.iter().map(|s| s.sweep()).sum::<f64>() / members.len() as f64;
    }
    out
}

/// Extends a slab interval continuously to sweep coordinate `s`.
fn extend_interval(
    r: &SSRegion,
    iv: &FiberInterval,
    axis: Axis,
    s: f64,
    pinned: &[usize],
) -> (f64, f64) {
    let lo_c = iv.lo_circle.expect("bounded fiber");
    let hi_c = iv.hi_circle.expect("bounded fiber");
    let lo = r.endpoint_at(lo_c, true, axis, s, pinned.contains(&lo_c));
    let hi = r.endpoint_at(hi_c, false, axis, s, pinned.contains(&hi_c));
    if hi < lo {
        let m = 0.5 * (lo + hi);
        (m, m)
    } else {
        (lo, hi)
    }
}

fn bounded_fiber(r: &SSRegion, s: f64, axis: Axis) -> Result<Vec<FiberInterval>> {
    let f = r.fiber(s, axis);
    if f.intervals
        .iter()
        .any(|iv| iv.lo_circle.is_none() || iv.hi_circle.is_none())
    {
        return Err(Error::InvalidRegion("region is unbounded".into()));
    }
    Ok(f.intervals)
}

/// Sweeps the region without validating it first.
pub fn sweep(r: &SSRegion, axis: Axis) -> Result<PRGraph> {
    let eps = r.tol.eps_abs;
    let touch = touch_slack(r);
    let sing = r.singular_points(axis)?;
    if sing.is_empty() {
        return Err(Error::InvalidRegion("region has no singular points".into()));
    }
    let clusters = cluster_levels(&sing, eps);
    let first = clusters[0].0.lo;
    let last = clusters[clusters.len() - 1].0.hi;
    if !bounded_fiber(r, first - 1.0, axis)?.is_empty()
        || !bounded_fiber(r, last + 1.0, axis)?.is_empty()
    {
        return Err(Error::InvalidRegion("region is unbounded".into()));
    }

    let mut slabs: Vec<Slab> = Vec::new();
    for w in clusters.windows(2) {
        let (lo, hi) = (w[0].0.hi, w[1].0.lo);
        let width = hi - lo;
        let mid = bounded_fiber(r, lo + 0.5 * width, axis)?;
        for q in [0.25, 0.75] {
            let n = bounded_fiber(r, lo + q * width, axis)?.len();
            if n != mid.len() {
                return Err(Error::GenericityViolation(format!(
                    "fiber count changes inside slab ({lo}, {hi})"
                )));
            }
        }
        slabs.push(Slab {
            lo,
            hi,
            intervals: mid,
            edges: Vec::new(),
        });
    }

    // Slab pieces are numbered globally for the edge union-find.
    let mut piece_base = Vec::with_capacity(slabs.len());
    let mut total = 0;
    for s in &slabs {
        piece_base.push(total);
        total += s.intervals.len();
    }
    let mut pieces_uf = UnionFind::new(total);

    struct Group {
        lo: f64,
        hi: f64,
        left: Vec<usize>,
        right: Vec<usize>,
        singulars: Vec<SingularPoint>,
    }

    let mut vertices: Vec<PRVertex> = Vec::new();
    // For each slab piece: vertex at its left end and right end, if any.
    let mut left_vertex: Vec<Option<usize>> = vec![None; total];
    let mut right_vertex: Vec<Option<usize>> = vec![None; total];
    let mut levels = Vec::with_capacity(clusters.len());

    for (k, (level, members)) in clusters.iter().enumerate() {
        let pinned: Vec<usize> = members
            .iter()
            .filter(|s| s.kind == SingularKind::Tangency)
            .map(|s| s.circles[0])
            .collect();
        // items: (lo, hi, is_left, index in slab)
        let mut items: Vec<(f64, f64, bool, usize)> = Vec::new();
        if k > 0 {
            for (i, iv) in slabs[k - 1].intervals.iter().enumerate() {
                let (lo, hi) = extend_interval(r, iv, axis, level.lo, &pinned);
                items.push((lo, hi, true, i));
            }
        }
        if k < slabs.len() {
            for (i, iv) in slabs[k].intervals.iter().enumerate() {
                let (lo, hi) = extend_interval(r, iv, axis, level.hi, &pinned);
                items.push((lo, hi, false, i));
            }
        }
        let mut uf = UnionFind::new(items.len());
        for a in 0..items.len() {
            for b in a + 1..items.len() {
                if items[a].0.max(items[b].0) <= items[a].1.min(items[b].1) + touch {
                    uf.union(a, b);
                }
            }
        }
        let mut roots: Vec<usize> = Vec::new();
        let mut groups: Vec<Group> = Vec::new();
        let mut group_of = vec![0; items.len()];
        for a in 0..items.len() {
            let root = uf.find(a);
            let gi = match roots.iter().position(|&x| x == root) {
                Some(gi) => gi,
                None => {
                    roots.push(root);
                    groups.push(Group {
                        lo: f64::INFINITY,
                        hi: f64::NEG_INFINITY,
                        left: Vec::new(),
                        right: Vec::new(),
                        singulars: Vec::new(),
                    });
                    groups.len() - 1
                }
            };
            group_of[a] = gi;
            let g = &mut groups[gi];
            g.lo = g.lo.min(items[a].0);
            g.hi = g.hi.max(items[a].1);
            if items[a].2 {
                g.left.push(items[a].3);
            } else {
                g.right.push(items[a].3);
            }
        }
        for s in members {
            let t = s.transverse();
            let hit = items
                .iter()
                .position(|it| t >= it.0 - touch && t <= it.1 + touch)
                .ok_or_else(|| {
                    Error::GenericityViolation(format!(
                        "singular point {} is not attached to any fiber component",
                        s.location
                    ))
                })?;
            groups[group_of[hit]].singulars.push(*s);
        }
        let spread = level.hi - level.lo;
        let vertex_groups = groups.iter().filter(|g| !g.singulars.is_empty()).count();
        if spread > 1e-12 * (1.0 + level.value.abs()) && vertex_groups > 1 {
            return Err(Error::GenericityViolation(format!(
                "distinct singular values merged near {} across separate components",
                level.value
            )));
        }
        groups.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for g in groups {
            if g.singulars.is_empty() {
                if g.left.len() != 1 || g.right.len() != 1 {
                    return Err(Error::GenericityViolation(format!(
                        "fiber topology changes at level {} without a singular point",
                        level.value
                    )));
                }
                let a = piece_base[k - 1] + g.left[0];
                let b = piece_base[k] + g.right[0];
                pieces_uf.union(a, b);
            } else {
                let id = vertices.len();
                for &i in &g.left {
                    right_vertex[piece_base[k - 1] + i] = Some(id);
                }
                for &i in &g.right {
                    left_vertex[piece_base[k] + i] = Some(id);
                }
                let mut singulars = g.singulars;
                singulars.sort_by(|a, b| a.transverse().total_cmp(&b.transverse()));
                vertices.push(PRVertex {
                    id,
                    sweep: level.value,
                    interval: (g.lo, g.hi),
                    kind: VertexKind::Other,
                    singulars,
                    level: k,
                });
            }
        }
        levels.push(level.clone());
    }

    // Collect edges from piece classes.
    let mut class_of: Vec<usize> = (0..total).map(|p| pieces_uf.find(p)).collect();
    let mut classes: Vec<usize> = class_of.clone();
    classes.sort_unstable();
    classes.dedup();
    // Endpoint vertices and the (slab, interval) pieces of each edge.
    type RawEdge = (usize, usize, Vec<(usize, usize)>);
    let mut raw_edges: Vec<RawEdge> = Vec::new();
    for &c in &classes {
        let mut pieces: Vec<(usize, usize)> = Vec::new();
        for (k, s) in slabs.iter().enumerate() {
            for i in 0..s.intervals.len() {
                if class_of[piece_base[k] + i] == c {
                    pieces.push((k, i));
                }
            }
        }
        let (k0, i0) = pieces[0];
        let (k1, i1) = *pieces.last().unwrap();
        let u = left_vertex[piece_base[k0] + i0];
        let v = right_vertex[piece_base[k1] + i1];
        match (u, v) {
            (Some(u), Some(v)) => raw_edges.push((u, v, pieces)),
            _ => {
                return Err(Error::GenericityViolation(
                    "edge without endpoint vertices".into(),
                ))
            }
        }
    }
    raw_edges.sort_by(|a, b| {
        (a.0, a.1).cmp(&(b.0, b.1)).then(
            slabs[a.2[0].0].intervals[a.2[0].1]
                .lo
                .total_cmp(&slabs[b.2[0].0].intervals[b.2[0].1].lo),
        )
    });
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (id, (u, v, pieces)) in raw_edges.into_iter().enumerate() {
        let &(ks, is) = pieces
            .iter()
            .max_by(|a, b| {
                let wa = slabs[a.0].hi - slabs[a.0].lo;
                let wb = slabs[b.0].hi - slabs[b.0].lo;
                wa.total_cmp(&wb).then(b.0.cmp(&a.0))
            })
            .unwrap();
        for &(k, i) in &pieces {
            class_of[piece_base[k] + i] = id;
        }
        edges.push(PREdge {
            id,
            endpoints: (u, v),
            slab: (vertices[u].sweep, vertices[v].sweep),
            sample: (slabs[ks].mid(), slabs[ks].intervals[is]),
            pieces,
        });
    }
    for (k, s) in slabs.iter_mut().enumerate() {
        s.edges = (0..s.intervals.len())
            .map(|i| class_of[piece_base[k] + i])
            .collect();
    }
    let mut g = PRGraph {
        axis,
        vertices,
        edges,
        levels,
        slabs,
    };
    for v in 0..g.vertices.len() {
        g.vertices[v].kind = VertexKind::from_degree(g.degree(v));
    }
    Ok(g)
}

/// Maps a point of the closure to the graph element containing its fiber component.
pub fn locate(r: &SSRegion, g: &PRGraph, p: Point) -> Result<Located> {
    if r.classify_point(p) == Location::Exterior {
        return Err(Error::PointOutsideRegion);
    }
    let axis = g.axis;
    let eps = r.tol.eps_abs;
    let touch = touch_slack(r);
    let (s, t) = (p.sweep(axis), p.transverse(axis));
    for (k, level) in g.levels.iter().enumerate() {
        if s >= level.lo - 2.0 * eps && s <= level.hi + 2.0 * eps {
            if let Some(v) = g
                .vertices
                .iter()
                .find(|v| v.level == k && t >= v.interval.0 - touch && t <= v.interval.1 + touch)
            {
                return Ok(Located::Vertex(v.id));
            }
            // A regular component at a critical level belongs to an edge.
            let slab_idx = if k < g.slabs.len() {
                k
            } else {
                k.wrapping_sub(1)
            };
            let slab = g.slabs.get(slab_idx).ok_or(Error::PointOutsideRegion)?;
            let best = slab
                .intervals
                .iter()
                .enumerate()
                .map(|(i, iv)| {
                    let (lo, hi) = extend_interval(r, iv, axis, s, &[]);
                    let d = if t < lo {
                        lo - t
                    } else if t > hi {
                        t - hi
                    } else {
                        0.0
                    };
                    (d, i)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .ok_or(Error::PointOutsideRegion)?;
            return Ok(Located::Edge {
                edge: slab.edges[best.1],
                interior: true,
            });
        }
    }
    let slab = g
        .slabs
        .iter()
        .find(|sl| s > sl.lo && s < sl.hi)
        .ok_or(Error::PointOutsideRegion)?;
    let fiber = r.fiber(s, axis);
    if fiber.intervals.len() != slab.intervals.len() {
        return Err(Error::GenericityViolation(
            "fiber count differs from slab sample".into(),
        ));
    }
    let i = fiber
        .intervals
        .iter()
        .position(|iv| iv.contains(t, touch))
        .ok_or(Error::PointOutsideRegion)?;
    Ok(Located::Edge {
        edge: slab.edges[i],
        interior: true,
    })
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // examples use rounded coordinates
mod tests {
    use super::*;
    use crate::geom::Circle;
    use crate::region::{HalfConstraint, Side};

    fn bite(x: f64, y: f64, r: f64) -> SSRegion {
        SSRegion::unit_disk().with_constraint(HalfConstraint::new(
            Circle::new(Point::new(x, y), r).unwrap(),
            Side::KeepOutside,
        ))
    }

    fn degrees(g: &PRGraph) -> Vec<usize> {
        (0..g.vertices.len()).map(|v| g.degree(v)).collect()
    }

    #[test]
    fn unit_disk_both_axes() {
        for axis in [Axis::Horizontal, Axis::Vertical] {
            let g = compute_pr_graph(&SSRegion::unit_disk(), axis).unwrap();
            assert_eq!(g.vertices.len(), 2);
            assert_eq!(g.edges.len(), 1);
            assert!(g.vertices.iter().all(|v| v.kind == VertexKind::Leaf));
            assert_eq!(g.criticals(), vec![-1.0, 1.0]);
            assert!(is_tree(&g));
        }
    }

    #[test]
    fn side_bite_pattern() {
        let g = compute_pr_graph(&bite(0.7071, 0.7071, 0.2), Axis::Horizontal).unwrap();
        assert_eq!(g.vertices.len(), 5);
        assert_eq!(g.edges.len(), 4);
        // sorted by sweep coordinate: -1, 0.5071, 0.5523, 0.8337, 1
        assert_eq!(degrees(&g), vec![1, 3, 1, 2, 1]);
        let xs: Vec<f64> = g.vertices.iter().map(|v| v.sweep).collect();
        assert_eq!(xs[0], -1.0);
        assert!((xs[1] - 0.5071).abs() < 1e-12);
        assert!((xs[2] - 0.55225).abs() < 1e-4);
        assert!((xs[3] - 0.83368).abs() < 1e-4);
        assert_eq!(xs[4], 1.0);
        assert!(g.vertices[2].singulars[0].kind == SingularKind::DoublePoint);
        assert!(is_tree(&g));
    }

    #[test]
    fn top_bite_is_a_path() {
        let g = compute_pr_graph(&bite(0.0, 1.0, 0.5), Axis::Horizontal).unwrap();
        assert_eq!(degrees(&g), vec![1, 2, 2, 1]);
        let x = (1.0f64 - 0.875 * 0.875).sqrt();
        assert!((g.vertices[1].sweep + x).abs() < 1e-12);
        assert!((g.vertices[2].sweep - x).abs() < 1e-12);
    }

    #[test]
    fn hole_gives_cycle() {
        let r = bite(0.0, 0.0, 0.3);
        let g = compute_pr_graph(&r, Axis::Horizontal).unwrap();
        assert!(!is_tree(&g));
        assert_eq!(g.vertices.len(), 4);
        assert_eq!(g.edges.len(), 4);
    }

    #[test]
    fn locate_points() {
        let r = SSRegion::unit_disk();
        let g = compute_pr_graph(&r, Axis::Horizontal).unwrap();
        assert_eq!(
            locate(&r, &g, Point::new(0.0, 0.0)).unwrap(),
            Located::Edge {
                edge: 0,
                interior: true
            }
        );
        assert_eq!(
            locate(&r, &g, Point::new(1.0, 0.0)).unwrap(),
            Located::Vertex(1)
        );
        assert_eq!(
            locate(&r, &g, Point::new(2.0, 0.0)),
            Err(Error::PointOutsideRegion)
        );

        let r = bite(0.7071, 0.7071, 0.2);
        let g = compute_pr_graph(&r, Axis::Horizontal).unwrap();
        let v = locate(&r, &g, Point::new(0.5071, 0.7071)).unwrap();
        assert_eq!(v, Located::Vertex(1));
        assert_eq!(g.vertices[1].kind, VertexKind::Junction);
    }

    #[test]
    fn edge_addresses_resolve() {
        let g = compute_pr_graph(&bite(0.7071, 0.7071, 0.2), Axis::Horizontal).unwrap();
        for e in 0..g.edges.len() {
            let addr = g.edge_address(e).unwrap();
            assert_eq!(g.resolve_edge_address(&addr).unwrap(), e, "{addr}");
        }
    }
}
