//! Circular arcs in R^3 given by their endpoints and the tangent at the
//! start.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::projective::{EPoint, Vec3};

const STRAIGHT_TOL: f64 = 1e-12;

/// Arc from `start` to `end` leaving `start` in direction `tangent`. A
/// tangent along the chord gives the straight segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircArc {
    start: Vec3,
    end: Vec3,
    tangent: Vec3,
}

enum Shape {
    Straight,
    Circle {
        center: Vec3,
        radius: f64,
        e1: Vec3,
        e2: Vec3,
        sweep: f64,
    },
}

impl CircArc {
    pub fn new(start: Vec3, end: Vec3, tangent: Vec3) -> Result<Self> {
        let chord = end - start;
        if chord.norm() <= STRAIGHT_TOL * (1.0 + start.norm()) {
            return Err(Error::DegenerateArc("coincident endpoints".into()));
        }
        if !(tangent.norm() > 0.0) || !tangent.iter().all(|c| c.is_finite()) {
            return Err(Error::DegenerateArc("invalid tangent".into()));
        }
        let t = tangent.normalize();
        let side = chord - t * chord.dot(&t);
        if side.norm() <= STRAIGHT_TOL * chord.norm() && chord.dot(&t) < 0.0 {
            return Err(Error::DegenerateArc("arc would pass through infinity".into()));
        }
        Ok(CircArc {
            start,
            end,
            tangent: t,
        })
    }

    /// Arc from `a` to `b` through `m`.
    pub fn from_three_points(a: Vec3, m: Vec3, b: Vec3) -> Result<Self> {
        let (u, w) = (m - a, b - a);
        let scale = u.norm().max(w.norm());
        if u.norm() <= STRAIGHT_TOL * scale || (b - m).norm() <= STRAIGHT_TOL * scale {
            return Err(Error::DegenerateArc("coincident points".into()));
        }
        let n = u.cross(&w);
        if n.norm() <= STRAIGHT_TOL * u.norm() * w.norm() {
            if u.dot(&w) > 0.0 && u.norm() < w.norm() {
                return CircArc::new(a, b, w);
            }
            return Err(Error::DegenerateArc("arc would pass through infinity".into()));
        }
        let center = a + (w * u.norm_squared() - u * w.norm_squared()).cross(&n) / (2.0 * n.norm_squared());
        let e1 = (a - center).normalize();
        let t = n.normalize().cross(&e1);
        let angle = |p: &Vec3, t: &Vec3| {
            let d = p - center;
            d.dot(t).atan2(d.dot(&e1)).rem_euclid(TAU)
        };
        let t = if angle(&m, &t) < angle(&b, &t) { t } else { -t };
        CircArc::new(a, b, t)
    }

    pub fn start(&self) -> Vec3 {
        self.start
    }

    pub fn end(&self) -> Vec3 {
        self.end
    }

    pub fn start_tangent(&self) -> Vec3 {
        self.tangent
    }

    fn shape(&self) -> Shape {
        let chord = self.end - self.start;
        let side = chord - self.tangent * chord.dot(&self.tangent);
        if side.norm() <= STRAIGHT_TOL * chord.norm() {
            return Shape::Straight;
        }
        let nrm = side.normalize();
        let radius = chord.norm_squared() / (2.0 * chord.dot(&nrm));
        let center = self.start + nrm * radius;
        let (e1, e2) = (-nrm, self.tangent);
        let d = self.end - center;
        let sweep = d.dot(&e2).atan2(d.dot(&e1)).rem_euclid(TAU);
        Shape::Circle {
            center,
            radius,
            e1,
            e2,
            sweep,
        }
    }

    pub fn is_straight(&self) -> bool {
        matches!(self.shape(), Shape::Straight)
    }

    /// Center and radius, `None` for a segment.
    pub fn circle(&self) -> Option<(Vec3, f64)> {
        match self.shape() {
            Shape::Straight => None,
            Shape::Circle { center, radius, .. } => Some((center, radius)),
        }
    }

    pub fn length(&self) -> f64 {
        match self.shape() {
            Shape::Straight => (self.end - self.start).norm(),
            Shape::Circle { radius, sweep, .. } => radius * sweep,
        }
    }

    /// Point at arc-length fraction `s` in [0, 1].
    pub fn point_at(&self, s: f64) -> Vec3 {
        match self.shape() {
            Shape::Straight => self.start + (self.end - self.start) * s,
            Shape::Circle {
                center,
                radius,
                e1,
                e2,
                sweep,
            } => {
                let phi = s * sweep;
                center + (e1 * phi.cos() + e2 * phi.sin()) * radius
            }
        }
    }

    /// Unit tangent at arc-length fraction `s`.
    pub fn tangent_at(&self, s: f64) -> Vec3 {
        match self.shape() {
            Shape::Straight => self.tangent,
            Shape::Circle { e1, e2, sweep, .. } => {
                let phi = s * sweep;
                e2 * phi.cos() - e1 * phi.sin()
            }
        }
    }

    /// `n + 1` points at uniform arc length, endpoints exact.
    pub fn samples(&self, n: usize) -> Vec<Vec3> {
        (0..=n)
            .map(|k| match k {
                0 => self.start,
                k if k == n => self.end,
                k => self.point_at(k as f64 / n as f64),
            })
            .collect()
    }

    /// Piece between arc-length fractions `s0 < s1`.
    pub fn sub_arc(&self, s0: f64, s1: f64) -> Result<CircArc> {
        let pt = |s: f64| {
            if s == 0.0 {
                self.start
            } else if s == 1.0 {
                self.end
            } else {
                self.point_at(s)
            }
        };
        CircArc::new(pt(s0), pt(s1), self.tangent_at(s0))
    }

    /// Image under a Möbius map, transported through the endpoints and the
    /// midpoint. Optional exact images of the endpoints replace the
    /// computed ones.
    pub fn transform(
        &self,
        f: impl Fn(&EPoint) -> Result<EPoint>,
        ends: Option<(Vec3, Vec3)>,
    ) -> Result<CircArc> {
        let img = |p: Vec3| -> Result<Vec3> {
            f(&EPoint::Finite(p))?
                .finite()
                .ok_or_else(|| Error::DegenerateArc("image passes through infinity".into()))
        };
        let (a, b) = match ends {
            Some(e) => e,
            None => (img(self.start)?, img(self.end)?),
        };
        CircArc::from_three_points(a, img(self.point_at(0.5))?, b)
    }

    /// Distance from `p` to the full circle (or line) carrying the arc.
    pub fn circle_distance(&self, p: &Vec3) -> f64 {
        match self.shape() {
            Shape::Straight => {
                let d = (self.end - self.start).normalize();
                let r = p - self.start;
                (r - d * r.dot(&d)).norm()
            }
            Shape::Circle {
                center,
                radius,
                e1,
                e2,
                ..
            } => {
                let nrm = e1.cross(&e2);
                let r = p - center;
                let h = r.dot(&nrm);
                let planar = (r - nrm * h).norm();
                (h * h + (planar - radius).powi(2)).sqrt()
            }
        }
    }
}

/// Angle in radians between two directions.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    let c = a.cross(b).norm();
    c.atan2(a.dot(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn quarter_circle() {
        let arc = CircArc::new(Vec3::new(1., 0., 0.), Vec3::new(0., 1., 0.), Vec3::new(0., 1., 0.)).unwrap();
        let (c, r) = arc.circle().unwrap();
        assert!(c.norm() < 1e-15 && (r - 1.0).abs() < 1e-15);
        assert!((arc.length() - FRAC_PI_2).abs() < 1e-14);
        let mid = arc.point_at(0.5);
        let h = 0.5f64.sqrt();
        assert!((mid - Vec3::new(h, h, 0.)).norm() < 1e-15);
        assert!((arc.tangent_at(1.0) - Vec3::new(-1., 0., 0.)).norm() < 1e-15);
    }

    #[test]
    fn long_way_round() {
        // leaving downward, the arc to (0,1,0) sweeps three quarters
        let arc = CircArc::new(Vec3::new(1., 0., 0.), Vec3::new(0., 1., 0.), Vec3::new(0., -1., 0.)).unwrap();
        assert!((arc.length() - 1.5 * PI).abs() < 1e-14);
        assert!((arc.point_at(1.0 / 3.0) - Vec3::new(0., -1., 0.)).norm() < 1e-14);
        assert!((arc.point_at(2.0 / 3.0) - Vec3::new(-1., 0., 0.)).norm() < 1e-14);
    }

    #[test]
    fn three_points() {
        let a = Vec3::new(1., 0., 2.);
        let m = Vec3::new(0., -1., 2.);
        let b = Vec3::new(-1., 0., 2.);
        let arc = CircArc::from_three_points(a, m, b).unwrap();
        let (c, r) = arc.circle().unwrap();
        assert!((c - Vec3::new(0., 0., 2.)).norm() < 1e-15 && (r - 1.0).abs() < 1e-15);
        assert!((arc.point_at(0.5) - m).norm() < 1e-14);
        let seg = CircArc::from_three_points(a, (a + b) / 2.0, b).unwrap();
        assert!(seg.is_straight());
        assert!(CircArc::from_three_points(a, b, (a + b) / 2.0).is_err());
    }

    #[test]
    fn sub_arcs_and_samples() {
        let arc = CircArc::new(Vec3::zeros(), Vec3::new(2., 0., 0.), Vec3::new(0., 0., 1.)).unwrap();
        let s = arc.samples(4);
        assert_eq!(s[0], arc.start());
        assert_eq!(s[4], arc.end());
        let piece = arc.sub_arc(0.25, 0.5).unwrap();
        assert!((piece.start() - s[1]).norm() < 1e-15);
        assert!((piece.end() - s[2]).norm() < 1e-14);
        assert!(piece.circle_distance(&arc.point_at(0.9)) < 1e-14);
        assert!(angle_between(&piece.start_tangent(), &arc.tangent_at(0.25)) < 1e-15);
    }
}
