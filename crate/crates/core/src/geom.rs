//! Points, circles and the tolerance policy shared by every predicate.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Coordinate along the sweep direction of `axis`.
    pub fn sweep(self, axis: Axis) -> f64 {
        match axis {
            Axis::Horizontal => self.x,
            Axis::Vertical => self.y,
        }
    }

    /// Coordinate transverse to the sweep direction of `axis`.
    pub fn transverse(self, axis: Axis) -> f64 {
        match axis {
            Axis::Horizontal => self.y,
            Axis::Vertical => self.x,
        }
    }

    /// Inverse of (`sweep`, `transverse`).
    pub fn from_axis(axis: Axis, sweep: f64, transverse: f64) -> Self {
        match axis {
            Axis::Horizontal => Point::new(sweep, transverse),
            Axis::Vertical => Point::new(transverse, sweep),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Projection used for sweeping: `Horizontal` projects onto the first
/// coordinate, `Vertical` onto the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Horizontal,
    Vertical,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::Horizontal => Axis::Vertical,
            Axis::Vertical => Axis::Horizontal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Absolute slack for distance comparisons.
    pub eps_abs: f64,
    /// Minimum crossing angle (radians) for two curves to count as transversal.
    pub eps_angle: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_abs: 1e-9,
            eps_angle: 1e-4,
        }
    }
}

impl Tolerance {
    pub fn new(eps_abs: f64, eps_angle: f64) -> Result<Self> {
        if !(eps_abs > 0.0 && eps_abs < 1e-3) {
            return Err(Error::InvalidTolerance(format!(
                "eps_abs must lie in (0, 1e-3), got {eps_abs}"
            )));
        }
        if !(eps_angle > 0.0 && eps_angle < 0.1) {
            return Err(Error::InvalidTolerance(format!(
                "eps_angle must lie in (0, 0.1), got {eps_angle}"
            )));
        }
        Ok(Tolerance { eps_abs, eps_angle })
    }

    /// Default tolerance with `eps_abs` replaced.
    pub fn with_abs(eps_abs: f64) -> Result<Self> {
        Tolerance::new(eps_abs, Tolerance::default().eps_angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidCircle(format!(
                "center {center}, radius {radius}"
            )));
        }
        Ok(Circle { center, radius })
    }

    pub fn unit() -> Self {
        Circle {
            center: Point::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn point_at(&self, angle: f64) -> Point {
        Point::new(
            self.center.x + self.radius * angle.cos(),
            self.center.y + self.radius * angle.sin(),
        )
    }

    /// Angle of `p` seen from the center, in `[0, 2π)`.
    pub fn angle_of(&self, p: Point) -> f64 {
        let a = (p.y - self.center.y).atan2(p.x - self.center.x);
        if a < 0.0 {
            a + 2.0 * PI
        } else {
            a
        }
    }

    /// `radius - |p - center|`: positive inside, negative outside.
    pub fn signed_dist(&self, p: Point) -> f64 {
        self.radius - self.center.dist(p)
    }

    pub fn residual(&self, p: Point) -> f64 {
        self.signed_dist(p).abs()
    }

    /// Half-width of the chord cut by the line `sweep = s`, or `None` when the
    /// line misses the circle.
    pub fn half_chord(&self, axis: Axis, s: f64) -> Option<f64> {
        let d = s - self.center.sweep(axis);
        let q = (self.radius - d) * (self.radius + d);
        (q >= 0.0).then(|| q.sqrt())
    }

    fn same_as(&self, other: &Circle, tol: &Tolerance) -> bool {
        self.center.dist(other.center) <= tol.eps_abs
            && (self.radius - other.radius).abs() <= tol.eps_abs
    }
}

/// Result of intersecting two circles.
#[derive(Debug, Clone, PartialEq)]
pub enum CircleIntersection {
    Disjoint,
    /// Single touching point; degenerate for genericity purposes.
    Tangent(Point),
    Crossing([Point; 2]),
}

impl CircleIntersection {
    pub fn points(&self) -> Vec<Point> {
        match self {
            CircleIntersection::Disjoint => Vec::new(),
            CircleIntersection::Tangent(p) => vec![*p],
            CircleIntersection::Crossing(ps) => ps.to_vec(),
        }
    }

    pub fn is_tangent(&self) -> bool {
        matches!(self, CircleIntersection::Tangent(_))
    }
}

pub fn circle_circle_intersections(
    a: &Circle,
    b: &Circle,
    tol: &Tolerance,
) -> Result<CircleIntersection> {
    if a.same_as(b, tol) {
        return Err(Error::IdenticalCircles);
    }
    // Order the pair canonically so the result is symmetric in the arguments.
    let (a, b) = if (a.center.x, a.center.y, a.radius) <= (b.center.x, b.center.y, b.radius) {
        (a, b)
    } else {
        (b, a)
    };
    let dx = b.center.x - a.center.x;
    let dy = b.center.y - a.center.y;
    let d = dx.hypot(dy);
    if d <= tol.eps_abs {
        // concentric, different radii
        return Ok(CircleIntersection::Disjoint);
    }
    let outer = a.radius + b.radius;
    let inner = (a.radius - b.radius).abs();
    if d > outer + tol.eps_abs || d < inner - tol.eps_abs {
        return Ok(CircleIntersection::Disjoint);
    }
    let (ux, uy) = (dx / d, dy / d);
    let along = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
    if (d - outer).abs() <= tol.eps_abs || (d - inner).abs() <= tol.eps_abs {
        let along = along.clamp(-a.radius, a.radius);
        return Ok(CircleIntersection::Tangent(Point::new(
            a.center.x + along * ux,
            a.center.y + along * uy,
        )));
    }
    let h = (a.radius * a.radius - along * along).max(0.0).sqrt();
    let base = Point::new(a.center.x + along * ux, a.center.y + along * uy);
    Ok(CircleIntersection::Crossing([
        Point::new(base.x - h * uy, base.y + h * ux),
        Point::new(base.x + h * uy, base.y - h * ux),
    ]))
}

/// Angle in `[0, π/2]` between the tangent lines of `a` and `b` at a common point `p`.
pub fn crossing_angle(p: Point, a: &Circle, b: &Circle) -> f64 {
    let (ax, ay) = (p.x - a.center.x, p.y - a.center.y);
    let (bx, by) = (p.x - b.center.x, p.y - b.center.y);
    let cross = (ax * by - ay * bx).abs();
    let dot = (ax * bx + ay * by).abs();
    cross.atan2(dot)
}

pub fn is_transversal(p: Point, a: &Circle, b: &Circle, tol: &Tolerance) -> Result<bool> {
    if a.residual(p) > tol.eps_abs || b.residual(p) > tol.eps_abs {
        return Err(Error::PointNotOnCircles);
    }
    Ok(crossing_angle(p, a, b) > tol.eps_angle)
}

/// The two critical points of the projection onto `axis` restricted to `c`,
/// in increasing sweep order.
pub fn axis_extreme_points(c: &Circle, axis: Axis) -> (Point, Point) {
    match axis {
        Axis::Horizontal => (
            Point::new(c.center.x - c.radius, c.center.y),
            Point::new(c.center.x + c.radius, c.center.y),
        ),
        Axis::Vertical => (
            Point::new(c.center.x, c.center.y - c.radius),
            Point::new(c.center.x, c.center.y + c.radius),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn circle(x: f64, y: f64, r: f64) -> Circle {
        Circle::new(Point::new(x, y), r).unwrap()
    }

    #[test]
    fn symmetric_unit_intersection() {
        let got =
            circle_circle_intersections(&circle(0.0, 0.0, 1.0), &circle(1.0, 0.0, 1.0), &tol())
                .unwrap();
        let mut pts = got.points();
        pts.sort_by(|p, q| p.y.partial_cmp(&q.y).unwrap());
        let h = 3f64.sqrt() / 2.0;
        assert!(pts[0].dist(Point::new(0.5, -h)) < 1e-12);
        assert!(pts[1].dist(Point::new(0.5, h)) < 1e-12);
    }

    #[test]
    fn disjoint_and_tangent() {
        let t = tol();
        assert_eq!(
            circle_circle_intersections(&circle(0.0, 0.0, 1.0), &circle(3.0, 0.0, 1.0), &t)
                .unwrap(),
            CircleIntersection::Disjoint
        );
        let tan = circle_circle_intersections(&circle(0.0, 0.0, 1.0), &circle(2.0, 0.0, 1.0), &t)
            .unwrap();
        assert!(tan.is_tangent());
        assert!(tan.points()[0].dist(Point::new(1.0, 0.0)) < 1e-12);
        // internal tangency
        let inner = circle_circle_intersections(&circle(0.0, 0.0, 1.0), &circle(0.5, 0.0, 0.5), &t)
            .unwrap();
        assert!(inner.is_tangent());
    }

    #[test]
    fn identical_rejected() {
        let c = circle(0.2, 0.3, 0.4);
        assert_eq!(
            circle_circle_intersections(&c, &c, &tol()),
            Err(Error::IdenticalCircles)
        );
    }

    #[test]
    fn transversality() {
        let t = tol();
        let h = 3f64.sqrt() / 2.0;
        let a = circle(0.0, 0.0, 1.0);
        assert!(is_transversal(Point::new(0.5, h), &a, &circle(1.0, 0.0, 1.0), &t).unwrap());
        assert!(!is_transversal(Point::new(1.0, 0.0), &a, &circle(2.0, 0.0, 1.0), &t).unwrap());
        let x = (1.0f64 - 0.875 * 0.875).sqrt();
        assert!(is_transversal(Point::new(x, 0.875), &a, &circle(0.0, 1.0, 0.5), &t).unwrap());
        assert_eq!(
            is_transversal(Point::new(0.0, 0.0), &a, &circle(0.0, 1.0, 0.5), &t),
            Err(Error::PointNotOnCircles)
        );
    }

    #[test]
    fn transversal_angle_matches_numeric_tangents() {
        // Tangent directions by central differences along each circle.
        let a = circle(0.0, 0.0, 1.0);
        let b = circle(0.0, 1.0, 0.5);
        let x = (1.0f64 - 0.875 * 0.875).sqrt();
        let p = Point::new(x, 0.875);
        let tangent = |c: &Circle| {
            let th = c.angle_of(p);
            let (q0, q1) = (c.point_at(th - 1e-6), c.point_at(th + 1e-6));
            (q1.x - q0.x, q1.y - q0.y)
        };
        let (ta, tb) = (tangent(&a), tangent(&b));
        let cosang = (ta.0 * tb.0 + ta.1 * tb.1).abs() / (ta.0.hypot(ta.1) * tb.0.hypot(tb.1));
        let numeric = cosang.acos();
        assert!((numeric - crossing_angle(p, &a, &b)).abs() < 1e-6);
        assert!(numeric > 0.1);
    }

    #[test]
    fn extremes() {
        assert_eq!(
            axis_extreme_points(&circle(0.0, 0.0, 1.0), Axis::Horizontal),
            (Point::new(-1.0, 0.0), Point::new(1.0, 0.0))
        );
        assert_eq!(
            axis_extreme_points(&circle(0.0, 1.0, 0.5), Axis::Horizontal),
            (Point::new(-0.5, 1.0), Point::new(0.5, 1.0))
        );
        assert_eq!(
            axis_extreme_points(&circle(0.0, 1.0, 0.5), Axis::Vertical),
            (Point::new(0.0, 0.5), Point::new(0.0, 1.5))
        );
    }

    #[test]
    fn tolerance_bounds() {
        assert!(Tolerance::new(1e-3, 1e-4).is_err());
        assert!(Tolerance::new(1e-9, 0.1).is_err());
        assert!(Tolerance::new(1e-6, 0.01).is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_circle() -> impl Strategy<Value = Circle> {
            (-2.0..2.0f64, -2.0..2.0f64, 0.05..2.0f64)
                .prop_map(|(x, y, r)| Circle::new(Point::new(x, y), r).unwrap())
        }

        proptest! {
            #[test]
            fn intersections_lie_on_both(a in arb_circle(), b in arb_circle()) {
                let t = Tolerance::default();
                if let Ok(res) = circle_circle_intersections(&a, &b, &t) {
                    for p in res.points() {
                        prop_assert!(a.residual(p) <= 10.0 * t.eps_abs);
                        prop_assert!(b.residual(p) <= 10.0 * t.eps_abs);
                    }
                }
            }

            #[test]
            fn intersections_symmetric(a in arb_circle(), b in arb_circle()) {
                let t = Tolerance::default();
                let ab = circle_circle_intersections(&a, &b, &t).map(|r| r.points());
                let ba = circle_circle_intersections(&b, &a, &t).map(|r| r.points());
                prop_assert_eq!(ab, ba);
            }

            #[test]
            fn transversality_symmetric(a in arb_circle(), b in arb_circle()) {
                let t = Tolerance::default();
                if let Ok(res) = circle_circle_intersections(&a, &b, &t) {
                    for p in res.points() {
                        prop_assert_eq!(is_transversal(p, &a, &b, &t), is_transversal(p, &b, &a, &t));
                    }
                }
            }

            #[test]
            fn extremes_on_circle(c in arb_circle()) {
                for axis in [Axis::Horizontal, Axis::Vertical] {
                    let (p, q) = axis_extreme_points(&c, axis);
                    prop_assert!(c.residual(p) < 1e-12);
                    prop_assert!(c.residual(q) < 1e-12);
                }
            }
        }
    }
}
