//! Regions cut out of the plane by sign constraints on circles.
//!
//! A region is the open cell `{p : g_j(p) > 0 for all j}` where `g_j` is the
//! signed distance to circle `j`, negated for `KeepOutside` constraints. The
//! closure is modeled as `{g_j >= 0}`.

use std::f64::consts::TAU;
use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{
    axis_extreme_points, circle_circle_intersections, crossing_angle, Axis, Circle,
    CircleIntersection, Point, Tolerance,
};
use crate::reeb;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    KeepInside,
    KeepOutside,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::KeepInside => 1.0,
            Side::KeepOutside => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfConstraint {
    pub circle: Circle,
    pub side: Side,
}

impl HalfConstraint {
    pub fn new(circle: Circle, side: Side) -> Self {
        HalfConstraint { circle, side }
    }

    /// Signed distance, positive on the allowed side.
    pub fn value(&self, p: Point) -> f64 {
        self.side.sign() * self.circle.signed_dist(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingularKind {
    /// Boundary point on exactly two circles.
    DoublePoint,
    /// Boundary point on one circle where the axis projection is critical.
    Tangency,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPoint {
    pub location: Point,
    pub kind: SingularKind,
    /// Constraint indices involved; the second entry is only meaningful for
    /// double points.
    pub circles: [usize; 2],
    pub axis: Axis,
}

impl SingularPoint {
    pub fn involves(&self, j: usize) -> bool {
        match self.kind {
            SingularKind::DoublePoint => self.circles.contains(&j),
            SingularKind::Tangency => self.circles[0] == j,
        }
    }

    pub fn sweep(&self) -> f64 {
        self.location.sweep(self.axis)
    }

    pub fn transverse(&self) -> f64 {
        self.location.transverse(self.axis)
    }
}

/// One component of a fiber. Finite endpoints remember the constraint whose
/// circle bounds them, which lets a slab's intervals be followed continuously.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_circle: Option<usize>,
    pub hi_circle: Option<usize>,
}

impl FiberInterval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64, slack: f64) -> bool {
        t >= self.lo - slack && t <= self.hi + slack
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fiber {
    pub axis: Axis,
    pub sweep: f64,
    pub intervals: Vec<FiberInterval>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    SeedNotInterior,
    NonTransversal {
        circles: (usize, usize),
        point: Point,
    },
    TriplePoint {
        circles: (usize, usize, usize),
        point: Point,
    },
    CircleMissesClosure {
        circle: usize,
    },
    IdenticalCircles {
        circles: (usize, usize),
    },
    Unbounded,
    Disconnected {
        components: usize,
    },
    Degenerate(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SeedNotInterior => write!(f, "seed is not an interior point"),
            Violation::NonTransversal { circles, point } => write!(
                f,
                "transversality violation: circles {} and {} at {}",
                circles.0, circles.1, point
            ),
            Violation::TriplePoint { circles, point } => write!(
                f,
                "triple point: circles {}, {}, {} at {}",
                circles.0, circles.1, circles.2, point
            ),
            Violation::CircleMissesClosure { circle } => {
                write!(f, "circle does not meet closure: circle {circle}")
            }
            Violation::IdenticalCircles { circles } => {
                write!(f, "identical circles {} and {}", circles.0, circles.1)
            }
            Violation::Unbounded => write!(f, "region is unbounded"),
            Violation::Disconnected { components } => {
                write!(f, "region is disconnected: {components} components")
            }
            Violation::Degenerate(msg) => write!(f, "degenerate configuration: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Angular interval `[start, end)` on a circle, `start` in `[0, 2π)` and
/// `end > start` (it may exceed `2π` when the arc wraps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleInterval {
    pub start: f64,
    pub end: f64,
}

impl AngleInterval {
    pub fn extent(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, angle: f64) -> bool {
        let mut a = angle.rem_euclid(TAU);
        if a < self.start {
            a += TAU;
        }
        a >= self.start && a <= self.end
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SSRegion {
    pub constraints: Vec<HalfConstraint>,
    pub seed: Point,
    pub tol: Tolerance,
}

impl SSRegion {
    pub fn new(constraints: Vec<HalfConstraint>, seed: Point, tol: Tolerance) -> Self {
        SSRegion {
            constraints,
            seed,
            tol,
        }
    }

    /// The closed unit disk `(D², {S¹})`.
    pub fn unit_disk() -> Self {
        SSRegion::unit_disk_with(Tolerance::default())
    }

    pub fn unit_disk_with(tol: Tolerance) -> Self {
        SSRegion::new(
            vec![HalfConstraint::new(Circle::unit(), Side::KeepInside)],
            Point::new(0.0, 0.0),
            tol,
        )
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn circle(&self, j: usize) -> &Circle {
        &self.constraints[j].circle
    }

    /// Smallest constraint value at `p`.
    pub fn min_value(&self, p: Point) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.value(p))
            .fold(f64::INFINITY, f64::min)
    }

    fn min_value_except(&self, p: Point, skip: &[usize]) -> f64 {
        self.constraints
            .iter()
            .enumerate()
            .filter(|(k, _)| !skip.contains(k))
            .map(|(_, c)| c.value(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn classify_point(&self, p: Point) -> Location {
        let eps = self.tol.eps_abs;
        let m = self.min_value(p);
        if m > eps {
            Location::Interior
        } else if m >= -eps {
            Location::Boundary
        } else {
            Location::Exterior
        }
    }

    /// New region with one more constraint appended. The seed is kept when it
    /// stays interior; otherwise a fresh one is picked deterministically.
    pub fn with_constraint(&self, c: HalfConstraint) -> SSRegion {
        let mut constraints = self.constraints.clone();
        constraints.push(c);
        let mut next = SSRegion::new(constraints, self.seed, self.tol);
        if next.min_value(self.seed) <= 1e3 * self.tol.eps_abs {
            if let Some(seed) = next.find_seed() {
                next.seed = seed;
            }
        }
        next
    }

    /// Midpoint of the widest fiber interval over all generic sample abscissae.
    pub fn find_seed(&self) -> Option<Point> {
        let axis = Axis::Horizontal;
        let mut cuts: Vec<f64> = Vec::new();
        for (i, c) in self.constraints.iter().enumerate() {
            let (a, b) = axis_extreme_points(&c.circle, axis);
            cuts.push(a.x);
            cuts.push(b.x);
            for d in &self.constraints[i + 1..] {
                if let Ok(res) = circle_circle_intersections(&c.circle, &d.circle, &self.tol) {
                    cuts.extend(res.points().iter().map(|p| p.x));
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut best: Option<(f64, Point)> = None;
        for w in cuts.windows(2) {
            if w[1] - w[0] <= 4.0 * self.tol.eps_abs {
                continue;
            }
            let x = 0.5 * (w[0] + w[1]);
            for iv in self.fiber(x, axis).intervals {
                if !iv.lo.is_finite() || !iv.hi.is_finite() {
                    continue;
                }
                let p = Point::new(x, iv.mid());
                let score = self.min_value(p);
                if best.is_none_or(|(s, _)| score > s) {
                    best = Some((score, p));
                }
            }
        }
        best.filter(|(s, _)| *s > self.tol.eps_abs).map(|(_, p)| p)
    }

    /// Transverse value of the finite endpoint of an allowed set bounded by
    /// constraint `j` at sweep coordinate `s`. `lower` selects whether the
    /// endpoint closes the interval from below. `pinned` forces a zero
    /// half-chord, used when `s` is known to be the circle's own extreme.
    pub(crate) fn endpoint_at(
        &self,
        j: usize,
        lower: bool,
        axis: Axis,
        s: f64,
        pinned: bool,
    ) -> f64 {
        let c = &self.constraints[j];
        let h = if pinned {
            0.0
        } else {
            c.circle.half_chord(axis, s).unwrap_or(0.0)
        };
        let ct = c.circle.center.transverse(axis);
        let upper_branch = match c.side {
            Side::KeepInside => !lower,
            Side::KeepOutside => lower,
        };
        if upper_branch {
            ct + h
        } else {
            ct - h
        }
    }

    /// Fiber of the closure over sweep coordinate `s`.
    pub fn fiber(&self, s: f64, axis: Axis) -> Fiber {
        let full = FiberInterval {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
            lo_circle: None,
            hi_circle: None,
        };
        let mut acc = vec![full];
        for (j, c) in self.constraints.iter().enumerate() {
            let ct = c.circle.center.transverse(axis);
            let allowed: Vec<FiberInterval> = match (c.side, c.circle.half_chord(axis, s)) {
                (Side::KeepInside, None) => Vec::new(),
                (Side::KeepInside, Some(h)) => vec![FiberInterval {
                    lo: ct - h,
                    hi: ct + h,
                    lo_circle: Some(j),
                    hi_circle: Some(j),
                }],
                (Side::KeepOutside, None) => vec![full],
                (Side::KeepOutside, Some(h)) => vec![
                    FiberInterval {
                        lo: f64::NEG_INFINITY,
                        hi: ct - h,
                        lo_circle: None,
                        hi_circle: Some(j),
                    },
                    FiberInterval {
                        lo: ct + h,
                        hi: f64::INFINITY,
                        lo_circle: Some(j),
                        hi_circle: None,
                    },
                ],
            };
            acc = intersect_intervals(&acc, &allowed);
            if acc.is_empty() {
                break;
            }
        }
        Fiber {
            axis,
            sweep: s,
            intervals: acc,
        }
    }

    /// Double points and axis tangencies on the boundary.
    pub fn singular_points(&self, axis: Axis) -> Result<Vec<SingularPoint>> {
        let eps = self.tol.eps_abs;
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let res = circle_circle_intersections(self.circle(i), self.circle(j), &self.tol)
                    .map_err(|_| {
                        Error::GenericityViolation(format!("circles {i} and {j} coincide"))
                    })?;
                for p in res.points() {
                    if self.min_value_except(p, &[i, j]) < -eps {
                        continue;
                    }
                    if res.is_tangent()
                        || crossing_angle(p, self.circle(i), self.circle(j)) <= self.tol.eps_angle
                    {
                        return Err(Error::GenericityViolation(format!(
                            "circles {i} and {j} meet non-transversally at {p}"
                        )));
                    }
                    if let Some(k) = self.third_circle_through(p, &[i, j]) {
                        return Err(Error::GenericityViolation(format!(
                            "circles {i}, {j}, {k} share the boundary point {p}"
                        )));
                    }
                    out.push(SingularPoint {
                        location: p,
                        kind: SingularKind::DoublePoint,
                        circles: [i, j],
                        axis,
                    });
                }
            }
        }
        for j in 0..self.len() {
            let (a, b) = axis_extreme_points(self.circle(j), axis);
            for p in [a, b] {
                // A tangency must sit strictly inside every other constraint,
                // otherwise it coincides with a double point.
                if self.min_value_except(p, &[j]) > eps {
                    out.push(SingularPoint {
                        location: p,
                        kind: SingularKind::Tangency,
                        circles: [j, j],
                        axis,
                    });
                }
            }
        }
        Ok(out)
    }

    fn third_circle_through(&self, p: Point, skip: &[usize]) -> Option<usize> {
        (0..self.len())
            .filter(|k| !skip.contains(k))
            .find(|&k| self.constraints[k].value(p).abs() <= self.tol.eps_abs)
    }

    /// Maximal arcs of circle `j` lying on the boundary of the region.
    pub fn boundary_arcs(&self, j: usize) -> Vec<AngleInterval> {
        let c = *self.circle(j);
        let mut angles: Vec<f64> = Vec::new();
        for k in 0..self.len() {
            if k == j {
                continue;
            }
            if let Ok(res) = circle_circle_intersections(&c, self.circle(k), &self.tol) {
                angles.extend(res.points().iter().map(|p| c.angle_of(*p)));
            }
        }
        let on_boundary = |angle: f64| self.min_value_except(c.point_at(angle), &[j]) > 0.0;
        if angles.is_empty() {
            return if on_boundary(0.0) {
                vec![AngleInterval {
                    start: 0.0,
                    end: TAU,
                }]
            } else {
                Vec::new()
            };
        }
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        let n = angles.len();
        let mut arcs = Vec::new();
        for idx in 0..n {
            let start = angles[idx];
            let end = if idx + 1 < n {
                angles[idx + 1]
            } else {
                angles[0] + TAU
            };
            if end - start <= 0.0 {
                continue;
            }
            if on_boundary(0.5 * (start + end)) {
                arcs.push(AngleInterval { start, end });
            }
        }
        // Join arcs separated only by the wrap-around seam.
        if arcs.len() >= 2 {
            let last = *arcs.last().unwrap();
            if (last.end - TAU - arcs[0].start).abs() < 1e-15 {
                arcs.pop();
                arcs[0] = AngleInterval {
                    start: last.start,
                    end: arcs[0].end + TAU,
                };
            }
        }
        arcs
    }

    pub fn validate(&self) -> ValidityReport {
        let eps = self.tol.eps_abs;
        let mut violations = Vec::new();
        if self.is_empty() {
            violations.push(Violation::Unbounded);
            return ValidityReport { violations };
        }
        if !self.seed.is_finite() || self.min_value(self.seed) <= eps {
            violations.push(Violation::SeedNotInterior);
        }
        if !self.constraints.iter().any(|c| c.side == Side::KeepInside) {
            violations.push(Violation::Unbounded);
        }
        let mut generic = true;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let res =
                    match circle_circle_intersections(self.circle(i), self.circle(j), &self.tol) {
                        Ok(r) => r,
                        Err(_) => {
                            violations.push(Violation::IdenticalCircles { circles: (i, j) });
                            generic = false;
                            continue;
                        }
                    };
                for p in res.points() {
                    if self.min_value_except(p, &[i, j]) < -eps {
                        continue;
                    }
                    if let Some(k) = self.third_circle_through(p, &[i, j]) {
                        violations.push(Violation::TriplePoint {
                            circles: (i, j, k),
                            point: p,
                        });
                        generic = false;
                    }
                    let transversal = matches!(res, CircleIntersection::Crossing(_))
                        && crossing_angle(p, self.circle(i), self.circle(j)) > self.tol.eps_angle;
                    if !transversal {
                        violations.push(Violation::NonTransversal {
                            circles: (i, j),
                            point: p,
                        });
                        generic = false;
                    }
                }
            }
        }
        for j in 0..self.len() {
            if self.boundary_arcs(j).is_empty() {
                violations.push(Violation::CircleMissesClosure { circle: j });
            }
        }
        if generic && !violations.contains(&Violation::Unbounded) {
            match reeb::sweep(self, Axis::Horizontal) {
                Ok(g) => {
                    let comps = g.component_count();
                    if comps != 1 {
                        violations.push(Violation::Disconnected { components: comps });
                    }
                }
                Err(e) => violations.push(Violation::Degenerate(e.to_string())),
            }
        }
        ValidityReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidRegion(
                report.to_string().trim_end().replace('\n', "; "),
            ))
        }
    }

    /// Axis-aligned bounding box of the closure, from its KeepInside circles.
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let mut lo = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut hi = Point::new(f64::INFINITY, f64::INFINITY);
        let mut any = false;
        for c in self
            .constraints
            .iter()
            .filter(|c| c.side == Side::KeepInside)
        {
            any = true;
            lo.x = lo.x.max(c.circle.center.x - c.circle.radius);
            lo.y = lo.y.max(c.circle.center.y - c.circle.radius);
            hi.x = hi.x.min(c.circle.center.x + c.circle.radius);
            hi.y = hi.y.min(c.circle.center.y + c.circle.radius);
        }
        any.then_some((lo, hi))
    }
}

/// Intersection of two sorted lists of disjoint closed intervals.
fn intersect_intervals(a: &[FiberInterval], b: &[FiberInterval]) -> Vec<FiberInterval> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let (x, y) = (&a[i], &b[j]);
        let (lo, lo_circle) = if x.lo >= y.lo {
            (x.lo, x.lo_circle)
        } else {
            (y.lo, y.lo_circle)
        };
        let (hi, hi_circle) = if x.hi <= y.hi {
            (x.hi, x.hi_circle)
        } else {
            (y.hi, y.hi_circle)
        };
        if lo <= hi {
            out.push(FiberInterval {
                lo,
                hi,
                lo_circle,
                hi_circle,
            });
        }
        if x.hi < y.hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Normalizes an angle to `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Angle halfway along the arc from `start` to `end` (counterclockwise).
pub fn arc_mid(arc: &AngleInterval) -> f64 {
    normalize_angle(0.5 * (arc.start + arc.end))
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // examples use rounded coordinates
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    fn disk_with_outside(c: Circle) -> SSRegion {
        SSRegion::unit_disk().with_constraint(HalfConstraint::new(c, Side::KeepOutside))
    }

    #[test]
    fn classify() {
        let r = SSRegion::unit_disk();
        assert_eq!(r.classify_point(Point::new(0.0, 0.0)), Location::Interior);
        assert_eq!(r.classify_point(Point::new(1.0, 0.0)), Location::Boundary);
        assert_eq!(r.classify_point(Point::new(2.0, 0.0)), Location::Exterior);
    }

    #[test]
    fn fibers() {
        let r = SSRegion::unit_disk();
        let f = r.fiber(0.0, Axis::Horizontal);
        assert_eq!(f.intervals.len(), 1);
        assert_eq!((f.intervals[0].lo, f.intervals[0].hi), (-1.0, 1.0));
        assert!(r.fiber(2.0, Axis::Horizontal).intervals.is_empty());

        let bite = disk_with_outside(circle(0.0, 1.0, 0.5));
        let f = bite.fiber(0.0, Axis::Horizontal);
        assert_eq!(f.intervals.len(), 1);
        assert_eq!((f.intervals[0].lo, f.intervals[0].hi), (-1.0, 0.5));
        assert_eq!(f.intervals[0].hi_circle, Some(1));
    }

    #[test]
    fn singular_points_of_disk() {
        let mut sp = SSRegion::unit_disk()
            .singular_points(Axis::Horizontal)
            .unwrap();
        sp.sort_by(|a, b| a.location.x.total_cmp(&b.location.x));
        assert_eq!(sp.len(), 2);
        assert!(sp.iter().all(|s| s.kind == SingularKind::Tangency));
        assert_eq!(sp[0].location, Point::new(-1.0, 0.0));
        assert_eq!(sp[1].location, Point::new(1.0, 0.0));
    }

    #[test]
    fn singular_points_of_top_bite() {
        let r = disk_with_outside(circle(0.0, 1.0, 0.5));
        let sp = r.singular_points(Axis::Horizontal).unwrap();
        let doubles: Vec<_> = sp
            .iter()
            .filter(|s| s.kind == SingularKind::DoublePoint)
            .collect();
        let tangencies: Vec<_> = sp
            .iter()
            .filter(|s| s.kind == SingularKind::Tangency)
            .collect();
        assert_eq!(doubles.len(), 2);
        assert_eq!(tangencies.len(), 2);
        // |p| = 1 and |p - (0,1)| = 0.5  =>  y = 0.875
        let x = (1.0f64 - 0.875 * 0.875).sqrt();
        for d in doubles {
            assert!((d.location.y - 0.875).abs() < 1e-12);
            assert!((d.location.x.abs() - x).abs() < 1e-12);
        }
        for t in tangencies {
            assert_eq!(t.circles[0], 0);
        }
    }

    #[test]
    fn singular_points_of_side_bite() {
        let r = disk_with_outside(circle(0.7071, 0.7071, 0.2));
        let sp = r.singular_points(Axis::Horizontal).unwrap();
        assert_eq!(sp.len(), 5);
        let small: Vec<_> = sp
            .iter()
            .filter(|s| s.kind == SingularKind::Tangency && s.circles[0] == 1)
            .collect();
        assert_eq!(small.len(), 1);
        assert!(small[0].location.dist(Point::new(0.5071, 0.7071)) < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(SSRegion::unit_disk().validate().is_valid());
        let tangent = disk_with_outside(circle(2.0, 0.0, 1.0));
        let rep = tangent.validate();
        assert!(
            rep.to_string().contains("transversality violation"),
            "{rep}"
        );
        let far = disk_with_outside(circle(3.0, 0.0, 0.5));
        let rep = far.validate();
        assert!(
            rep.to_string().contains("circle does not meet closure"),
            "{rep}"
        );
        let mut bad_seed = SSRegion::unit_disk();
        bad_seed.seed = Point::new(5.0, 0.0);
        assert_eq!(
            bad_seed.validate().violations,
            vec![Violation::SeedNotInterior]
        );
    }

    #[test]
    fn disconnected_cell_is_reported() {
        // A wide KeepOutside band splits the disk into two caps.
        let mut r = SSRegion::unit_disk().with_constraint(HalfConstraint::new(
            circle(0.0, 4.9, 5.0),
            Side::KeepOutside,
        ));
        r = r.with_constraint(HalfConstraint::new(
            circle(0.0, -4.9, 5.0),
            Side::KeepOutside,
        ));
        let rep = r.validate();
        assert!(
            rep.violations
                .iter()
                .any(|v| matches!(v, Violation::Disconnected { components: 2 })),
            "{rep}"
        );
    }

    #[test]
    fn arcs_of_disk_and_bite() {
        let r = SSRegion::unit_disk();
        assert_eq!(
            r.boundary_arcs(0),
            vec![AngleInterval {
                start: 0.0,
                end: TAU
            }]
        );
        let b = disk_with_outside(circle(0.0, 1.0, 0.5));
        let small = b.boundary_arcs(1);
        assert_eq!(small.len(), 1);
        // Lower arc of the small circle, through 270 degrees.
        assert!(small[0].contains(1.5 * PI));
        assert!(!small[0].contains(0.5 * PI));
        let dp_angle = (-0.125f64).atan2((1.0f64 - 0.875 * 0.875).sqrt());
        assert!((small[0].extent() - (PI - 2.0 * dp_angle.abs())).abs() < 1e-9);
        let big = b.boundary_arcs(0);
        assert_eq!(big.len(), 1);
        let cap = 2.0 * (1.0f64 - 0.875 * 0.875).sqrt().atan2(0.875);
        assert!((big[0].extent() - (TAU - cap)).abs() < 1e-9);
        assert!(!big[0].contains(0.5 * PI));
    }

    #[test]
    fn seed_moves_when_covered() {
        let r = disk_with_outside(circle(0.0, 0.0, 0.5));
        assert!(r.min_value(r.seed) > 0.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_bite() -> impl Strategy<Value = SSRegion> {
            (0.0..TAU, 0.05..0.4f64)
                .prop_map(|(th, r)| disk_with_outside(circle(th.cos(), th.sin(), r)))
        }

        proptest! {
            #[test]
            fn fiber_matches_dense_sampling(r in arb_bite(), x in -0.99..0.99f64) {
                let f = r.fiber(x, Axis::Horizontal);
                let n = 4000;
                let inside: Vec<bool> = (0..=n)
                    .map(|i| -1.0 + 2.0 * i as f64 / n as f64)
                    .map(|y| r.min_value(Point::new(x, y)) >= 0.0)
                    .collect();
                for (i, &flag) in inside.iter().enumerate() {
                    let y = -1.0 + 2.0 * i as f64 / n as f64;
                    let in_fiber = f.intervals.iter().any(|iv| iv.contains(y, 0.0));
                    prop_assert_eq!(flag, in_fiber, "y = {}", y);
                }
            }

            #[test]
            fn singular_points_order_invariant(
                a in (0.0..TAU, 0.05..0.3f64),
                b in (0.0..TAU, 0.05..0.3f64),
            ) {
                let c1 = HalfConstraint::new(circle(a.0.cos(), a.0.sin(), a.1), Side::KeepOutside);
                let c2 = HalfConstraint::new(circle(b.0.cos(), b.0.sin(), b.1), Side::KeepOutside);
                let base = HalfConstraint::new(Circle::unit(), Side::KeepInside);
                let r1 = SSRegion::new(vec![base, c1, c2], Point::new(0.0, 0.0), Tolerance::default());
                let r2 = SSRegion::new(vec![c2, base, c1], Point::new(0.0, 0.0), Tolerance::default());
                if let (Ok(s1), Ok(s2)) = (r1.singular_points(Axis::Horizontal), r2.singular_points(Axis::Horizontal)) {
                    let key = |v: Vec<SingularPoint>| {
                        let mut k: Vec<(i64, i64)> = v.iter()
                            .map(|s| ((s.location.x * 1e9).round() as i64, (s.location.y * 1e9).round() as i64))
                            .collect();
                        k.sort();
                        k
                    };
                    prop_assert_eq!(key(s1), key(s2));
                }
            }

            #[test]
            fn singular_points_on_boundary(r in arb_bite()) {
                if r.validate().is_valid() {
                    for axis in [Axis::Horizontal, Axis::Vertical] {
                        for s in r.singular_points(axis).unwrap() {
                            prop_assert_eq!(r.classify_point(s.location), Location::Boundary);
                        }
                    }
                }
            }
        }
    }
}
