//! Test-side oracles that share no code with the library's sweep, canonical
//! forms or grammar.

#![allow(dead_code)]

use std::collections::BTreeSet;

use circle_reeb::{SSRegion, Side};

// ---------------------------------------------------------------- trees

/// AHU code of the tree rooted at `root`.
fn rooted_code(adj: &[Vec<usize>], root: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[root]
        .iter()
        .filter(|&&c| c != parent)
        .map(|&c| rooted_code(adj, c, root))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism-invariant string for an unrooted tree: the smallest rooted
/// code over all roots. Quadratic, which is fine at test sizes.
pub fn tree_code(adj: &[Vec<usize>]) -> String {
    if adj.is_empty() {
        return String::new();
    }
    (0..adj.len())
        .map(|r| rooted_code(adj, r, usize::MAX))
        .min()
        .unwrap()
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// All trees with `2..=max` vertices up to isomorphism, grown by leaf addition.
pub fn all_trees(max: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut layer = vec![adjacency(2, &[(0, 1)])];
    for n in 2..=max {
        out.extend(layer.iter().cloned());
        if n == max {
            break;
        }
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for adj in &layer {
            for v in 0..n {
                let mut grown = adj.clone();
                grown.push(vec![v]);
                grown[v].push(n);
                if seen.insert(tree_code(&grown)) {
                    next.push(grown);
                }
            }
        }
        layer = next;
    }
    out
}

pub fn edges_of(adj: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for (u, ns) in adj.iter().enumerate() {
        for &v in ns {
            if u < v {
                e.push((u, v));
            }
        }
    }
    e
}

// ---------------------------------------------------------------- raster

/// Signed slack of constraint `j` at `(x, y)`: positive on the allowed side.
fn slack(r: &SSRegion, j: usize, x: f64, y: f64) -> f64 {
    let c = &r.constraints[j];
    let d = (x - c.circle.center.x).hypot(y - c.circle.center.y);
    let v = c.circle.radius - d;
    match c.side {
        Side::KeepInside => v,
        Side::KeepOutside => -v,
    }
}

fn inside(r: &SSRegion, x: f64, y: f64) -> bool {
    (0..r.len()).all(|j| slack(r, j, x, y) > 0.0)
}

fn argmin(r: &SSRegion, x: f64, y: f64) -> usize {
    (0..r.len())
        .min_by(|&a, &b| slack(r, a, x, y).total_cmp(&slack(r, b, x, y)))
        .unwrap()
}

/// One maximal vertical run of inside cells, labeled by the constraint that
/// is tightest at its bottom and top cells.
#[derive(Debug, Clone, Copy)]
struct Run {
    lo: usize,
    hi: usize,
    lo_label: usize,
    hi_label: usize,
}

pub struct Raster {
    pub n: usize,
    x0: f64,
    y0: f64,
    pub cell: f64,
}

impl Raster {
    /// Square grid of `n x n` cells over the bounding box of the
    /// keep-inside circles.
    pub fn over(r: &SSRegion, n: usize) -> Raster {
        let (mut lo, mut hi) = ((f64::NEG_INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::INFINITY));
        for c in r.constraints.iter().filter(|c| c.side == Side::KeepInside) {
            let (cx, cy, rr) = (c.circle.center.x, c.circle.center.y, c.circle.radius);
            lo = (lo.0.max(cx - rr), lo.1.max(cy - rr));
            hi = (hi.0.min(cx + rr), hi.1.min(cy + rr));
        }
        let side = (hi.0 - lo.0).max(hi.1 - lo.1) * 1.01;
        let (mx, my) = (0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1));
        Raster {
            n,
            x0: mx - 0.5 * side,
            y0: my - 0.5 * side,
            cell: side / n as f64,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.cell
    }

    /// Ordinate of the center of cell row `k`.
    pub fn y(&self, k: usize) -> f64 {
        self.y0 + (k as f64 + 0.5) * self.cell
    }

    fn runs(&self, r: &SSRegion, i: usize) -> Vec<Run> {
        let x = self.x0 + (i as f64 + 0.5) * self.cell;
        let mut runs = Vec::new();
        let mut start = None;
        for k in 0..=self.n {
            let ink = k < self.n && inside(r, x, self.y0 + (k as f64 + 0.5) * self.cell);
            match (ink, start) {
                (true, None) => start = Some(k),
                (false, Some(s)) => {
                    let y = |c: usize| self.y0 + (c as f64 + 0.5) * self.cell;
                    runs.push(Run {
                        lo: s,
                        hi: k - 1,
                        lo_label: argmin(r, x, y(s)),
                        hi_label: argmin(r, x, y(k - 1)),
                    });
                    start = None;
                }
                _ => {}
            }
        }
        runs
    }
}

/// Graph read off the raster, before and after dropping debris.
#[derive(Debug)]
pub struct RasterGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    /// Components of fewer than `DEBRIS_RUNS` runs that were dropped.
    pub debris: usize,
    pub components: usize,
    /// Column abscissa and run middle of each vertex.
    pub points: Vec<(f64, f64)>,
}

const DEBRIS_RUNS: usize = 8;
/// Height from which a run's boundary labels are trusted.
const TRUSTED_RUN_CELLS: usize = 8;

/// Horizontal graph of the region from an `n x n` rasterization: runs in
/// adjacent columns touching (8-connected) are linked, and a run is an event
/// when it has other than one neighbor on either side or when its labels
/// differ from those of its one-to-one predecessor.
pub fn raster_graph(r: &SSRegion, n: usize) -> RasterGraph {
    use rayon::prelude::*;
    let grid = Raster::over(r, n);
    let cols: Vec<Vec<Run>> = (0..n).into_par_iter().map(|i| grid.runs(r, i)).collect();

    // Global ids for runs, plus links between consecutive columns.
    let mut base = vec![0usize; n + 1];
    for i in 0..n {
        base[i + 1] = base[i] + cols[i].len();
    }
    let total = base[n];
    let mut succ = vec![Vec::new(); total];
    let mut pred = vec![Vec::new(); total];
    for i in 0..n.saturating_sub(1) {
        for (a, ra) in cols[i].iter().enumerate() {
            for (b, rb) in cols[i + 1].iter().enumerate() {
                if rb.lo <= ra.hi + 1 && ra.lo <= rb.hi + 1 {
                    succ[base[i] + a].push(base[i + 1] + b);
                    pred[base[i + 1] + b].push(base[i] + a);
                }
            }
        }
    }
    let run_of = |id: usize| {
        let i = base.partition_point(|&b| b <= id) - 1;
        cols[i][id - base[i]]
    };

    // Drop small components.
    let mut comp = vec![usize::MAX; total];
    let mut sizes = Vec::new();
    for s in 0..total {
        if comp[s] != usize::MAX {
            continue;
        }
        let c = sizes.len();
        let mut stack = vec![s];
        comp[s] = c;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &v in succ[u].iter().chain(&pred[u]) {
                if comp[v] == usize::MAX {
                    comp[v] = c;
                    stack.push(v);
                }
            }
        }
        sizes.push(size);
    }
    let keep: Vec<bool> = sizes.iter().map(|&s| s >= DEBRIS_RUNS).collect();
    let debris = keep.iter().filter(|k| !**k).count();
    let components = keep.iter().filter(|k| **k).count();

    // Labels are trusted only on runs tall enough for their bottom and top
    // cells to sit near different boundary arcs; along a one-to-one chain the
    // last trusted labels are carried forward and a change is an event.
    let tall = |run: &Run| run.hi - run.lo + 1 >= TRUSTED_RUN_CELLS;
    let mut trusted: Vec<Option<(usize, usize)>> = vec![None; total];
    let mut critical = vec![false; total];
    for u in 0..total {
        let run = run_of(u);
        let labels = tall(&run).then_some((run.lo_label, run.hi_label));
        let chained = pred[u].len() == 1 && succ[pred[u][0]].len() == 1;
        critical[u] = pred[u].len() != 1 || succ[u].len() != 1;
        if !chained {
            trusted[u] = labels;
            continue;
        }
        let prev = trusted[pred[u][0]];
        match (prev, labels) {
            (Some(a), Some(b)) if a != b => {
                critical[u] = true;
                trusted[u] = labels;
            }
            (_, Some(_)) => trusted[u] = labels,
            (_, None) => trusted[u] = prev,
        }
    }
    let mut vid = vec![usize::MAX; total];
    let mut points = Vec::new();
    for u in 0..total {
        if keep[comp[u]] && critical[u] {
            vid[u] = points.len();
            let i = base.partition_point(|&b| b <= u) - 1;
            let run = run_of(u);
            points.push((grid.x(i), 0.5 * (grid.y(run.lo) + grid.y(run.hi))));
        }
    }
    let vertices = points.len();
    let mut edges = Vec::new();
    for u in 0..total {
        if vid[u] == usize::MAX {
            continue;
        }
        for &s in &succ[u] {
            let mut w = s;
            while vid[w] == usize::MAX {
                w = succ[w][0];
            }
            edges.push((vid[u], vid[w]));
        }
    }
    RasterGraph {
        vertices,
        edges,
        debris,
        components,
        points,
    }
}

/// Boundary points where the horizontal sweep can change: leftmost and
/// rightmost points of each circle and pairwise crossings, kept when they
/// lie on the closure of the region.
pub fn critical_points(r: &SSRegion) -> Vec<(f64, f64)> {
    let on_closure = |x: f64, y: f64, skip: &[usize]| {
        (0..r.len()).all(|k| skip.contains(&k) || slack(r, k, x, y) >= -1e-9)
    };
    let mut pts = Vec::new();
    for (j, c) in r.constraints.iter().enumerate() {
        let (cx, cy, rr) = (c.circle.center.x, c.circle.center.y, c.circle.radius);
        for x in [cx - rr, cx + rr] {
            if on_closure(x, cy, &[j]) {
                pts.push((x, cy));
            }
        }
        for (k, d) in r.constraints.iter().enumerate().skip(j + 1) {
            let (dx, dy) = (d.circle.center.x - cx, d.circle.center.y - cy);
            let dist = dx.hypot(dy);
            let rd = d.circle.radius;
            if dist == 0.0 || dist > rr + rd || dist < (rr - rd).abs() {
                continue;
            }
            let a = (rr * rr - rd * rd + dist * dist) / (2.0 * dist);
            let h = (rr * rr - a * a).max(0.0).sqrt();
            let (mx, my) = (cx + a * dx / dist, cy + a * dy / dist);
            for s in [-1.0, 1.0] {
                let (x, y) = (mx - s * h * dy / dist, my + s * h * dx / dist);
                if on_closure(x, y, &[j, k]) {
                    pts.push((x, y));
                }
            }
        }
    }
    pts
}

/// Geometric scales the raster must resolve, in cells.
#[derive(Debug, Clone, Copy)]
pub struct Features {
    /// Smallest circle radius.
    pub radius: f64,
    /// Smallest distance between two critical points.
    pub spacing: f64,
    /// Smallest sweep gap between critical points joined by a vertical
    /// segment inside the closure.
    pub sweep_gap: f64,
}

impl Features {
    pub fn min(&self) -> f64 {
        self.radius.min(self.spacing).min(self.sweep_gap)
    }
}

pub fn features(r: &SSRegion, cell: f64) -> Features {
    let pts = critical_points(r);
    let radius = r
        .constraints
        .iter()
        .map(|c| c.circle.radius)
        .fold(f64::INFINITY, f64::min);
    let (mut spacing, mut sweep_gap) = (f64::INFINITY, f64::INFINITY);
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            spacing = spacing.min((p.0 - q.0).hypot(p.1 - q.1));
            let dx = (p.0 - q.0).abs();
            if dx < sweep_gap {
                let x = 0.5 * (p.0 + q.0);
                let joined = (0..=64).all(|s| {
                    let y = p.1 + (q.1 - p.1) * s as f64 / 64.0;
                    (0..r.len()).all(|k| slack(r, k, x, y) >= -cell)
                });
                if joined {
                    sweep_gap = dx;
                }
            }
        }
    }
    Features {
        radius: radius / cell,
        spacing: spacing / cell,
        sweep_gap: sweep_gap / cell,
    }
}

// ---------------------------------------------------------------- patterns

/// `adj` with edge `u - v` replaced by `u - a - b - v`; returns the new
/// adjacency and the two inserted vertices.
pub fn subdivide_twice(adj: &[Vec<usize>], u: usize, v: usize) -> (Vec<Vec<usize>>, usize, usize) {
    let n = adj.len();
    let mut edges: Vec<_> = edges_of(adj)
        .into_iter()
        .filter(|&(x, y)| (x, y) != (u.min(v), u.max(v)))
        .collect();
    edges.extend([(u, n), (n, n + 1), (n + 1, v)]);
    (adjacency(n + 2, &edges), n, n + 1)
}

/// Codes of the trees a disk bite on `u - v` may produce: two subdivisions
/// and a leaf on either new vertex.
pub fn bite_codes(adj: &[Vec<usize>], u: usize, v: usize) -> Vec<String> {
    let (sub, a, b) = subdivide_twice(adj, u, v);
    [a, b]
        .into_iter()
        .map(|at| {
            let mut g = sub.clone();
            g.push(vec![at]);
            let leaf = g.len() - 1;
            g[at].push(leaf);
            tree_code(&g)
        })
        .collect()
}

pub fn cut_code(adj: &[Vec<usize>], u: usize, v: usize) -> String {
    tree_code(&subdivide_twice(adj, u, v).0)
}

/// Sweep values of critical points present in `after` but not in `before`,
/// sorted.
pub fn new_critical_xs(before: &SSRegion, after: &SSRegion) -> Vec<f64> {
    let old = critical_points(before);
    let mut xs: Vec<f64> = critical_points(after)
        .into_iter()
        .filter(|p| !old.iter().any(|q| (p.0 - q.0).abs() < 1e-9 && (p.1 - q.1).abs() < 1e-9))
        .map(|p| p.0)
        .collect();
    xs.sort_by(f64::total_cmp);
    xs
}

/// Compares a graph given as vertex count and edges with the raster graph;
/// `Err` describes the mismatch.
pub fn compare_with_raster(rg: &RasterGraph, vertices: usize, edges: &[(usize, usize)]) -> Result<(), String> {
    if rg.components != 1 {
        return Err(format!("raster has {} components", rg.components));
    }
    if rg.edges.len() + 1 != rg.vertices {
        return Err(format!("raster graph has {} vertices and {} edges", rg.vertices, rg.edges.len()));
    }
    let want = tree_code(&adjacency(vertices, edges));
    let got = tree_code(&adjacency(rg.vertices, &rg.edges));
    if want != got {
        return Err(format!(
            "sweep graph {vertices}v/{}e differs from raster graph {}v/{}e",
            edges.len(),
            rg.vertices,
            rg.edges.len()
        ));
    }
    Ok(())
}
