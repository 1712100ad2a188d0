//! Polynomial description of a region and of the associated real algebraic model.

use std::fmt;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::region::{HalfConstraint, SSRegion};

const MONOMIALS: [&str; 6] = ["", "x1", "x2", "x1^2", "x1*x2", "x2^2"];

/// A quadratic in `x1, x2` with coefficients for `1, x1, x2, x1^2, x1*x2, x2^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadratic(pub [f64; 6]);

impl Quadratic {
    /// Positive exactly on the allowed side of the constraint.
    pub fn of_constraint(c: &HalfConstraint) -> Quadratic {
        let (cx, cy, r) = (c.circle.center.x, c.circle.center.y, c.circle.radius);
        let inside = [r * r - cx * cx - cy * cy, 2.0 * cx, 2.0 * cy, -1.0, 0.0, -1.0];
        let s = c.side.sign();
        Quadratic(inside.map(|a| s * a))
    }

    pub fn eval(&self, p: Point) -> f64 {
        let c = &self.0;
        c[0] + c[1] * p.x + c[2] * p.y + c[3] * p.x * p.x + c[4] * p.x * p.y + c[5] * p.y * p.y
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, m) in self.0.iter().zip(MONOMIALS) {
            if *c == 0.0 {
                continue;
            }
            let mag = c.abs();
            if first {
                if *c < 0.0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if *c < 0.0 { " - " } else { " + " })?;
            }
            first = false;
            match (m.is_empty(), mag == 1.0) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(m)?,
                (false, false) => write!(f, "{mag}*{m}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn f_polynomials(r: &SSRegion) -> Vec<Quadratic> {
    r.constraints.iter().map(Quadratic::of_constraint).collect()
}

pub fn emit_f_polynomials(r: &SSRegion) -> Vec<String> {
    f_polynomials(r).iter().map(ToString::to_string).collect()
}

/// Grouping of constraints into equations and the sphere dimension of each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraicModelSpec {
    /// 1-based equation label of each constraint.
    pub labeling: Vec<usize>,
    /// `d(i)` for labels `1..=l'`.
    pub degrees: Vec<usize>,
}

impl AlgebraicModelSpec {
    /// Identity labeling and `d = 1` everywhere.
    pub fn identity(l: usize) -> Self {
        AlgebraicModelSpec {
            labeling: (1..=l).collect(),
            degrees: vec![1; l],
        }
    }

    pub fn label_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.label_count() + 2 + self.degrees.iter().sum::<usize>()
    }

    fn check(&self, l: usize) -> Result<()> {
        if self.labeling.is_empty() || self.degrees.is_empty() {
            return Err(Error::InvalidSpec("empty labeling".into()));
        }
        if self.labeling.len() != l {
            return Err(Error::InvalidSpec(format!(
                "labeling has {} entries for {l} constraints",
                self.labeling.len()
            )));
        }
        if let Some(i) = self.degrees.iter().position(|&d| d == 0) {
            return Err(Error::InvalidSpec(format!("d({}) must be at least 1", i + 1)));
        }
        let lp = self.label_count();
        let mut used = vec![0usize; lp];
        for &label in &self.labeling {
            if label == 0 || label > lp {
                return Err(Error::InvalidSpec(format!("label {label} outside 1..={lp}")));
            }
            used[label - 1] += 1;
        }
        if let Some(i) = used.iter().position(|&u| u != 1) {
            return Err(Error::InvalidSpec(format!(
                "label {} is used {} times; distinct circles need distinct labels",
                i + 1,
                used[i]
            )));
        }
        Ok(())
    }
}

/// The defining system, one equation per label, with an `ambient_dim` header.
pub fn emit_model(r: &SSRegion, spec: &AlgebraicModelSpec) -> Result<String> {
    r.ensure_valid()?;
    spec.check(r.len())?;
    let fs = f_polynomials(r);
    let mut out = format!("ambient_dim {}\n", spec.ambient_dim());
    for (i, &d) in spec.degrees.iter().enumerate() {
        let label = i + 1;
        let product: Vec<String> = spec
            .labeling
            .iter()
            .zip(&fs)
            .filter(|(&l, _)| l == label)
            .map(|(_, f)| format!("({f})"))
            .collect();
        out.push_str(&product.join("*"));
        for k in 1..=d + 1 {
            out.push_str(&format!(" - y{label}_{k}^2"));
        }
        out.push_str(" = 0\n");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Circle;
    use crate::region::Side;

    #[test]
    fn disk_polynomial() {
        assert_eq!(emit_f_polynomials(&SSRegion::unit_disk()), vec!["1 - x1^2 - x2^2"]);
    }

    #[test]
    fn outside_polynomial_is_positive_outside() {
        let c = HalfConstraint::new(Circle::new(Point::new(0.0, 1.0), 0.5).unwrap(), Side::KeepOutside);
        let q = Quadratic::of_constraint(&c);
        assert_eq!(q.to_string(), "0.75 - 2*x2 + x1^2 + x2^2");
        assert!(q.eval(Point::new(0.0, 0.0)) > 0.0);
        assert!(q.eval(Point::new(0.0, 1.0)) < 0.0);
    }

    #[test]
    fn disk_model() {
        let r = SSRegion::unit_disk();
        let text = emit_model(&r, &AlgebraicModelSpec::identity(1)).unwrap();
        assert_eq!(text, "ambient_dim 4\n(1 - x1^2 - x2^2) - y1_1^2 - y1_2^2 = 0\n");
    }

    #[test]
    fn bad_specs() {
        let r = SSRegion::unit_disk();
        let empty = AlgebraicModelSpec {
            labeling: vec![],
            degrees: vec![],
        };
        assert!(matches!(emit_model(&r, &empty), Err(Error::InvalidSpec(_))));
        let zero = AlgebraicModelSpec {
            labeling: vec![1],
            degrees: vec![0],
        };
        assert!(matches!(emit_model(&r, &zero), Err(Error::InvalidSpec(_))));
    }
}
