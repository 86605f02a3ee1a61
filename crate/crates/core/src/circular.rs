//! Circular and multi-circular nets in R^3 ∪ {∞}, studied through their
//! Möbius lift.

use std::fmt;

use nalgebra::{Matrix3, Rotation3};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::net::{rectangles, Direction, EuclidNet, Grid, PointNet, Violation};
use crate::projective::{
    invert_point, moebius_lift, span_rank, sphere_rep, EPoint, HPoint, QuadricForm,
    RankTol, SubspaceSignature, Vec3,
};
use crate::qnets::{grid_first_violation, grid_violations, laplace_data};
use crate::quadric_nets::generate_by_reflections;

/// Points closer than this (relative to their magnitude) count as equal.
const DUPLICATE_TOL: f64 = 1e-12;

fn check_distinct(pts: &[EPoint]) -> Result<()> {
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let d = pts[a].distance(&pts[b]);
            let scale = match (pts[a], pts[b]) {
                (EPoint::Finite(p), EPoint::Finite(q)) => 1.0 + p.norm().max(q.norm()),
                _ => 1.0,
            };
            if d <= DUPLICATE_TOL * scale {
                return Err(Error::DuplicatePoints);
            }
        }
    }
    Ok(())
}

/// Whether four distinct points lie on a common circle (or line).
pub fn is_concyclic(p: &[EPoint; 4]) -> Result<bool> {
    check_distinct(p)?;
    let lifts: Vec<HPoint> = p.iter().map(moebius_lift).collect();
    Ok(span_rank(&lifts, RankTol::default())? <= 3)
}

/// Faces (or, if `exhaustive`, coordinate rectangles) whose vertices are not
/// concyclic, as rank violations of the Möbius lift.
pub fn circular_violations(net: &EuclidNet, exhaustive: bool, exec: Exec) -> Vec<Violation> {
    grid_violations(net.lift().grid(), exhaustive, exec)
}

pub fn is_circular_net(net: &EuclidNet) -> bool {
    grid_first_violation(net.lift().grid(), false, Exec::default()).is_none()
}

pub fn is_multi_circular(net: &EuclidNet) -> bool {
    is_multi_circular_with(net, Exec::default())
}

pub fn is_multi_circular_with(net: &EuclidNet, exec: Exec) -> bool {
    grid_first_violation(net.lift().grid(), true, exec).is_none()
}

pub fn first_multi_circular_violation(net: &EuclidNet, exec: Exec) -> Option<Violation> {
    grid_first_violation(net.lift().grid(), true, exec)
}

/// Sphere (as a point of R^{4,1}) of the strip between parameter lines
/// `k` and `k + 1` of direction `dir`: the Laplace point of the lifted strip.
/// Inversion in it swaps the two bounding polylines.
pub fn strip_sphere(net: &EuclidNet, dir: Direction, k: usize) -> Result<HPoint> {
    let lifted = net.lift();
    strip_sphere_lifted(&lifted, dir, k)
}

fn strip_sphere_lifted(lifted: &PointNet, dir: Direction, k: usize) -> Result<HPoint> {
    let (nu, nv) = lifted.dims();
    let pts: Vec<HPoint> = match dir {
        Direction::U => {
            if k + 1 >= nu || nv < 2 {
                return Err(Error::InvalidArgument(format!("no strip {k} in direction U")));
            }
            (0..nv)
                .flat_map(|j| [lifted.at(k, j), lifted.at(k + 1, j)])
                .collect()
        }
        Direction::V => {
            if k + 1 >= nv || nu < 2 {
                return Err(Error::InvalidArgument(format!("no strip {k} in direction V")));
            }
            (0..nu)
                .flat_map(|i| [lifted.at(i, k), lifted.at(i, k + 1)])
                .collect()
        }
    };
    if pts.len() > 4 && span_rank(&pts, RankTol::default())? <= 3 {
        return Err(Error::DegenerateStrip);
    }
    let quad = match dir {
        Direction::U => lifted.quad(k, 0),
        Direction::V => lifted.quad(0, k),
    };
    let ld = laplace_data(&quad).map_err(|e| match e {
        Error::DegenerateQuad => Error::DegenerateStrip,
        other => other,
    })?;
    let s = match dir {
        Direction::U => ld.y1,
        Direction::V => ld.y2,
    };
    s.normalize()
}

/// All strip spheres of one direction.
pub fn strip_spheres(net: &EuclidNet, dir: Direction) -> Result<Vec<HPoint>> {
    let lifted = net.lift();
    let (nu, nv) = net.dims();
    let count = match dir {
        Direction::U => nu - 1,
        Direction::V => nv - 1,
    };
    (0..count)
        .map(|k| strip_sphere_lifted(&lifted, dir, k))
        .collect()
}

/// Two families of sphere representatives with <s1_i, s2_j> = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereFamilyPair {
    pub s1: Vec<HPoint>,
    pub s2: Vec<HPoint>,
}

/// Multi-circular net generated by reflecting `x00` in the two families.
pub fn generate_multi_circular(x00: &EPoint, fams: &SphereFamilyPair) -> Result<EuclidNet> {
    let q = QuadricForm::moebius();
    for s in fams.s1.iter().chain(&fams.s2) {
        if q.eval(s, s)? <= 0.0 {
            return Err(Error::InvalidArgument(
                "family members must be real spheres".into(),
            ));
        }
    }
    let net = generate_by_reflections(&q, &fams.s1, &fams.s2, &moebius_lift(x00))?;
    EuclidNet::drop_from(&net)
}

/// Möbius normal forms of generic multi-circular nets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CircularClass {
    Rotational,
    Cone,
    Cylinder,
    Degenerate,
}

impl fmt::Display for CircularClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CircularClass::Rotational => "Rotational",
            CircularClass::Cone => "Cone",
            CircularClass::Cylinder => "Cylinder",
            CircularClass::Degenerate => "Degenerate",
        })
    }
}

/// Class together with the signatures of the two strip-sphere spans.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularClassification {
    pub class: CircularClass,
    pub span_u: SubspaceSignature,
    pub span_v: SubspaceSignature,
}

fn class_of(sig: &SubspaceSignature) -> Option<CircularClass> {
    if sig.dim != 2 {
        return None;
    }
    if sig.is(1, 0, 1) {
        Some(CircularClass::Cylinder)
    } else if sig.is(1, 1, 0) {
        Some(CircularClass::Cone)
    } else if sig.is(2, 0, 0) {
        Some(CircularClass::Rotational)
    } else {
        None
    }
}

fn rank_class(c: CircularClass) -> u8 {
    match c {
        CircularClass::Cylinder => 0,
        CircularClass::Cone => 1,
        CircularClass::Rotational => 2,
        CircularClass::Degenerate => 3,
    }
}

/// Möbius class of a multi-circular net, read off the signature of the
/// two-dimensional span of its strip spheres.
pub fn classify_multi_circular(net: &EuclidNet) -> Result<CircularClassification> {
    let (nu, nv) = net.dims();
    if nu < 3 || nv < 3 {
        return Err(Error::InvalidArgument(format!(
            "classification needs at least 3x3 vertices, got {nu}x{nv}"
        )));
    }
    let net = &centered(net);
    if !is_multi_circular(net) {
        return Err(Error::NotMultiCircular);
    }
    let q = QuadricForm::moebius();
    let span_u = q.restricted_signature(&strip_spheres(net, Direction::U)?)?;
    let span_v = q.restricted_signature(&strip_spheres(net, Direction::V)?)?;
    let class = if span_u.dim < 2 || span_v.dim < 2 {
        CircularClass::Degenerate
    } else {
        // a two-dimensional span decides; if both are, the more special
        // class wins
        [class_of(&span_u), class_of(&span_v)]
            .into_iter()
            .flatten()
            .min_by_key(|c| rank_class(*c))
            .unwrap_or(CircularClass::Degenerate)
    };
    Ok(CircularClassification {
        class,
        span_u,
        span_v,
    })
}

/// Similar copy with centroid at the origin and unit mean radius. The lift
/// is badly conditioned for small nets far from the origin, and the
/// classification does not see similarities.
fn centered(net: &EuclidNet) -> EuclidNet {
    let pts: Vec<Vec3> = net.grid().data().iter().filter_map(|p| p.finite()).collect();
    if pts.len() < net.grid().data().len() {
        return net.clone();
    }
    let c = pts.iter().sum::<Vec3>() / pts.len() as f64;
    let r = pts.iter().map(|p| (p - c).norm()).sum::<f64>() / pts.len() as f64;
    if !(r > 0.0) {
        return net.clone();
    }
    similarity(net, &Rotation3::identity(), 1.0 / r, &(-c / r))
}

/// Parameter of the canonical samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalKind {
    Rotational,
    Cone,
    Cylinder,
}

/// Multi-circular nets in Möbius normal form. The first index runs over
/// `params` (rotation angles, scale factors from the apex, or translation
/// offsets), the second over the planar `profile`.
///
/// * Rotational: profile points (r, z) with r > 0, vertex
///   (r cos θ, r sin θ, z).
/// * Cone: profile points (u, v), generator direction (u, v, 1) normalized,
///   vertex λ · direction.
/// * Cylinder: profile points (u, v), vertex (u, v, o).
pub fn sample_canonical(
    kind: CanonicalKind,
    profile: &[(f64, f64)],
    params: &[f64],
) -> Result<EuclidNet> {
    if profile.len() < 2 || params.len() < 2 {
        return Err(Error::DegenerateProfile(
            "need at least two profile points and two parameters".into(),
        ));
    }
    for (a, pa) in profile.iter().enumerate() {
        if !pa.0.is_finite() || !pa.1.is_finite() {
            return Err(Error::DegenerateProfile(format!("profile point {a} not finite")));
        }
        for pb in &profile[a + 1..] {
            if (pa.0 - pb.0).abs() + (pa.1 - pb.1).abs() < 1e-12 {
                return Err(Error::DegenerateProfile(format!("repeated profile point {a}")));
            }
        }
    }
    for (a, ta) in params.iter().enumerate() {
        for tb in &params[a + 1..] {
            let same = match kind {
                CanonicalKind::Rotational => {
                    let d = (ta - tb).rem_euclid(std::f64::consts::TAU);
                    d < 1e-12 || std::f64::consts::TAU - d < 1e-12
                }
                _ => (ta - tb).abs() < 1e-12,
            };
            if same {
                return Err(Error::DegenerateProfile(format!("repeated parameter {a}")));
            }
        }
    }
    let (nu, nv) = (params.len(), profile.len());
    let grid = match kind {
        CanonicalKind::Rotational => {
            if profile.iter().any(|p| p.0 <= 0.0) {
                return Err(Error::DegenerateProfile(
                    "rotational profile needs positive radii".into(),
                ));
            }
            Grid::from_fn(nu, nv, |i, j| {
                let (r, z) = profile[j];
                let t = params[i];
                Vec3::new(r * t.cos(), r * t.sin(), z)
            })
        }
        CanonicalKind::Cone => {
            if params.iter().any(|l| *l <= 0.0) {
                return Err(Error::DegenerateProfile("cone factors must be positive".into()));
            }
            let dirs: Vec<Vec3> = profile
                .iter()
                .map(|(u, v)| Vec3::new(*u, *v, 1.0).normalize())
                .collect();
            Grid::from_fn(nu, nv, |i, j| dirs[j] * params[i])
        }
        CanonicalKind::Cylinder => Grid::from_fn(nu, nv, |i, j| {
            let (u, v) = profile[j];
            Vec3::new(u, v, params[i])
        }),
    };
    Ok(EuclidNet::from_points(&grid))
}

/// Largest of the three Ptolemy products is the one of the diagonals; the
/// quad a, b, c, d is embedded iff that is |ac| |bd|.
fn embedded_finite(a: Vec3, b: Vec3, c: Vec3, d: Vec3) -> bool {
    let ab_cd = (a - b).norm() * (c - d).norm();
    let bc_da = (b - c).norm() * (d - a).norm();
    let ac_bd = (a - c).norm() * (b - d).norm();
    ac_bd >= ab_cd && ac_bd >= bc_da
}

/// Möbius-normalizes four concyclic points so all are finite and not
/// collinear, then applies the Ptolemy test.
fn quad_embedded(pts: [EPoint; 4]) -> Result<bool> {
    let finite: Vec<Vec3> = pts.iter().filter_map(|p| p.finite()).collect();
    let collinear = finite.len() < 4 || {
        let u = finite[1] - finite[0];
        finite[2..]
            .iter()
            .all(|p| u.cross(&(p - finite[0])).norm() <= 1e-12 * u.norm() * (p - finite[0]).norm())
    };
    if !collinear {
        return Ok(embedded_finite(finite[0], finite[1], finite[2], finite[3]));
    }
    // invert in a unit sphere centered off the line
    let base = finite[0];
    let dir = if finite.len() > 1 {
        (finite[1] - base).normalize()
    } else {
        Vec3::x()
    };
    let perp = if dir.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let off = dir.cross(&perp).normalize();
    let spread = finite
        .iter()
        .map(|p| (p - base).norm())
        .fold(1.0f64, f64::max);
    let center = base + off * spread;
    let s = sphere_rep(&center, spread)?;
    let mut img = [Vec3::zeros(); 4];
    for (k, p) in pts.iter().enumerate() {
        img[k] = invert_point(&s, p)?
            .finite()
            .ok_or(Error::DegenerateArc("inversion center on the circle".into()))?;
    }
    Ok(embedded_finite(img[0], img[1], img[2], img[3]))
}

/// Whether every coordinate rectangle is an embedded circular quadrilateral.
pub fn check_embedded(net: &EuclidNet) -> Result<bool> {
    if !is_multi_circular(net) {
        return Err(Error::NotMultiCircular);
    }
    let (nu, nv) = net.dims();
    for (i0, i1, j0, j1) in rectangles(nu, nv) {
        let q = [
            net.at(i0, j0),
            net.at(i1, j0),
            net.at(i1, j1),
            net.at(i0, j1),
        ];
        if !quad_embedded(q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether four concyclic points, taken in the given cyclic order, form an
/// embedded quadrilateral.
pub fn is_embedded_quad(p: &[EPoint; 4]) -> Result<bool> {
    if !is_concyclic(p)? {
        return Err(Error::NotConcyclic);
    }
    quad_embedded(*p)
}

/// Every interior vertex and its four diagonal neighbours lie on a sphere.
pub fn is_discrete_isothermic(net: &EuclidNet) -> bool {
    let (nu, nv) = net.dims();
    let lifted = net.lift();
    for i in 1..nu.saturating_sub(1) {
        for j in 1..nv.saturating_sub(1) {
            let pts = [
                lifted.at(i, j),
                lifted.at(i - 1, j - 1),
                lifted.at(i + 1, j - 1),
                lifted.at(i - 1, j + 1),
                lifted.at(i + 1, j + 1),
            ];
            if span_rank(&pts, RankTol::default()).map_or(true, |r| r > 4) {
                return false;
            }
        }
    }
    true
}

/// Image of the net under inversion in the sphere |p - center| = radius.
pub fn invert_net(net: &EuclidNet, center: &Vec3, radius: f64) -> Result<EuclidNet> {
    let s = sphere_rep(center, radius)?;
    net.map_points(|p| invert_point(&s, p))
}

/// Image under p ↦ scale · R p + t (∞ fixed).
pub fn similarity(net: &EuclidNet, rot: &Rotation3<f64>, scale: f64, t: &Vec3) -> EuclidNet {
    let m: Matrix3<f64> = rot.matrix() * scale;
    net.map_points(|p| {
        Ok(match p {
            EPoint::Finite(x) => EPoint::Finite(m * x + t),
            EPoint::Infinity => EPoint::Infinity,
        })
    })
    .expect("similarities never fail")
}

/// Lifts, drops back and reports the largest vertex displacement; a cheap
/// sanity check for nets near ∞.
pub fn lift_round_trip_error(net: &EuclidNet) -> Result<f64> {
    let back = EuclidNet::drop_from(&net.lift())?;
    Ok(net.max_distance(&back))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnets::is_multi_q_net;

    fn e(x: f64, y: f64, z: f64) -> EPoint {
        EPoint::new(x, y, z)
    }

    #[test]
    fn concyclic_examples() {
        assert!(is_concyclic(&[e(0., 0., 0.), e(1., 0., 0.), e(0., 1., 0.), e(1., 1., 0.)]).unwrap());
        assert!(!is_concyclic(&[e(0., 0., 0.), e(1., 0., 0.), e(0., 1., 0.), e(0., 0., 1.)]).unwrap());
        assert!(is_concyclic(&[e(0., 0., 0.), e(1., 1., 1.), e(2., 2., 2.), EPoint::Infinity]).unwrap());
        assert_eq!(
            is_concyclic(&[e(0., 0., 0.), e(0., 0., 0.), e(0., 1., 0.), e(1., 1., 0.)]),
            Err(Error::DuplicatePoints)
        );
    }

    fn rotational() -> EuclidNet {
        let profile = [(1.0, 0.0), (1.4, 0.3), (1.7, 0.9), (1.6, 1.5), (1.2, 2.0)];
        let angles: Vec<f64> = (0..8).map(|k| 0.3 * k as f64).collect();
        sample_canonical(CanonicalKind::Rotational, &profile, &angles).unwrap()
    }

    #[test]
    fn rotational_sampler() {
        let net = rotational();
        assert_eq!(net.dims(), (8, 5));
        assert!(is_multi_circular(&net));
        assert!(is_multi_q_net(&net.lift()));
        assert!(check_embedded(&net).unwrap());
        assert!(is_discrete_isothermic(&net));
        let c = classify_multi_circular(&net).unwrap();
        assert_eq!(c.class, CircularClass::Rotational, "{c:?}");
    }

    #[test]
    fn cone_and_cylinder_samplers() {
        let profile = [(0.0, 0.1), (0.5, 0.2), (0.8, 0.7), (0.6, 1.2), (0.1, 1.5)];
        let params = [1.0, 1.5, 2.2, 3.0];
        let cone = sample_canonical(CanonicalKind::Cone, &profile, &params).unwrap();
        assert!(is_multi_circular(&cone));
        assert_eq!(classify_multi_circular(&cone).unwrap().class, CircularClass::Cone);
        let cyl = sample_canonical(CanonicalKind::Cylinder, &profile, &params).unwrap();
        assert!(is_multi_circular(&cyl));
        assert_eq!(classify_multi_circular(&cyl).unwrap().class, CircularClass::Cylinder);
    }

    #[test]
    fn inversion_preserves_class() {
        let net = rotational();
        let inv = invert_net(&net, &Vec3::new(3.0, -1.0, 4.0), 2.0).unwrap();
        assert!(is_multi_circular(&inv));
        assert_eq!(
            classify_multi_circular(&inv).unwrap().class,
            CircularClass::Rotational
        );
    }

    #[test]
    fn strip_sphere_swaps_polylines() {
        let net = rotational();
        for (dir, count) in [(Direction::U, 7), (Direction::V, 4)] {
            for k in 0..count {
                let s = strip_sphere(&net, dir, k).unwrap();
                let (nu, nv) = net.dims();
                let n = if dir == Direction::U { nv } else { nu };
                for m in 0..n {
                    let (a, b) = match dir {
                        Direction::U => (net.at(k, m), net.at(k + 1, m)),
                        Direction::V => (net.at(m, k), net.at(m, k + 1)),
                    };
                    assert!(invert_point(&s, &a).unwrap().distance(&b) < 1e-8);
                }
            }
        }
        // meridian strips: planes through the axis
        let s = strip_sphere(&net, Direction::U, 0).unwrap();
        assert!(s[2].abs() < 1e-12 && (s[3] - s[4]).abs() < 1e-12 && s[3].abs() < 1e-12);
        let q = QuadricForm::moebius();
        let s2 = strip_sphere(&net, Direction::V, 0).unwrap();
        assert!(q.eval(&s, &s2).unwrap().abs() < 1e-12);
    }

    #[test]
    fn symmetric_trapezoid_strip() {
        let g = Grid::from_fn(2, 3, |i, j| {
            let x = if i == 0 { -1.0 } else { 1.0 };
            let w = 1.0 + 0.5 * j as f64;
            Vec3::new(x * w, j as f64, 0.0)
        });
        let net = EuclidNet::from_points(&g);
        let s = strip_sphere(&net, Direction::U, 0).unwrap();
        // plane x = 0
        assert!(s[1].abs() < 1e-12 && s[2].abs() < 1e-12 && s[3].abs() < 1e-12 && s[4].abs() < 1e-12);
    }

    #[test]
    fn embedded_order() {
        let sq = [e(0., 0., 0.), e(1., 0., 0.), e(1., 1., 0.), e(0., 1., 0.)];
        assert!(is_embedded_quad(&sq).unwrap());
        let crossed = [e(0., 0., 0.), e(1., 1., 0.), e(1., 0., 0.), e(0., 1., 0.)];
        assert!(!is_embedded_quad(&crossed).unwrap());
        let line = [e(0., 0., 0.), e(1., 0., 0.), e(2., 0., 0.), EPoint::Infinity];
        assert!(is_embedded_quad(&line).unwrap());
        let line_crossed = [e(0., 0., 0.), e(2., 0., 0.), e(1., 0., 0.), EPoint::Infinity];
        assert!(!is_embedded_quad(&line_crossed).unwrap());
    }

    #[test]
    fn generate_cone_type() {
        // planes through the z-axis and spheres centered at the origin
        let s1: Vec<HPoint> = (0..3)
            .map(|k| {
                let t = 0.4 * k as f64 + 0.2;
                crate::projective::plane_rep(&Vec3::new(t.cos(), t.sin(), 0.0), 0.0).unwrap()
            })
            .collect();
        let s2: Vec<HPoint> = (0..3)
            .map(|k| sphere_rep(&Vec3::zeros(), 1.0 + 0.3 * k as f64).unwrap())
            .collect();
        let fams = SphereFamilyPair { s1, s2 };
        let net = generate_multi_circular(&e(0.7, 0.1, 0.4), &fams).unwrap();
        assert!(is_multi_circular(&net));
        assert_eq!(classify_multi_circular(&net).unwrap().class, CircularClass::Cone);

        let bad = SphereFamilyPair {
            s1: vec![crate::projective::plane_rep(&Vec3::x(), 0.0).unwrap()],
            s2: vec![crate::projective::plane_rep(&Vec3::new(1.0, 1.0, 0.0), 0.0).unwrap()],
        };
        assert_eq!(
            generate_multi_circular(&e(0.7, 0.1, 0.4), &bad),
            Err(Error::MirrorsNotOrthogonal { i: 0, j: 0 })
        );
    }
}
