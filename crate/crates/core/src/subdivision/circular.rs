//! Circular-net subdivision by Dupin cyclide patches, realized as
//! reflection orbits in the Möbius quadric.

use crate::circular::{is_circular_net, is_concyclic};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::net::{EuclidNet, Grid};
use crate::projective::{
    meet_lines, moebius_drop, moebius_lift, EPoint, HPoint, ProjLine, QuadricForm, Vec3,
};
use crate::qnets::laplace_data;
use crate::quadric_nets::reflection_orbit;

use super::arc::{angle_between, CircArc};

/// |cos| of the angle between the arcs at x00 must stay below this.
pub const ORTHOGONALITY_TOL: f64 = 1e-7;
/// Largest admissible angle (radians) between consecutive seed arcs.
pub const C1_TOL: f64 = 1e-6;
/// Mirrors of the two families are accepted as orthogonal up to this
/// relative inner product.
const MIRROR_TOL: f64 = 1e-6;
/// Endpoint mismatch between arcs and vertices, relative to the scale.
const ENDPOINT_TOL: f64 = 1e-9;

/// Seed arcs on the two axes of a net: `u[i]` runs x(i,0)→x(i+1,0) and
/// `v[j]` runs x(0,j)→x(0,j+1).
#[derive(Debug, Clone, PartialEq)]
pub struct SeedArcs {
    pub u: Vec<CircArc>,
    pub v: Vec<CircArc>,
}

impl SeedArcs {
    /// Tangent-continuous arc splines through the first row and column.
    /// Each spline starts on the circle through its first three vertices
    /// (a segment if there are only two) and every further arc leaves its
    /// vertex along the end tangent of the previous one. The first
    /// v-tangent is made orthogonal to the first u-tangent.
    pub fn spline(net: &EuclidNet) -> Result<SeedArcs> {
        let (nu, nv) = net.dims();
        if nu < 2 || nv < 2 {
            return Err(Error::InvalidArgument("net needs at least 2x2 vertices".into()));
        }
        let row: Vec<Vec3> = (0..nu).map(|i| finite(&net.at(i, 0))).collect::<Result<_>>()?;
        let col: Vec<Vec3> = (0..nv).map(|j| finite(&net.at(0, j))).collect::<Result<_>>()?;
        let u0 = start_tangent(&row)?;
        let mut v0 = start_tangent(&col)?;
        v0 -= u0 * v0.dot(&u0);
        if v0.norm() <= 1e-9 {
            return Err(Error::DegenerateArc("first row and column are tangent".into()));
        }
        Ok(SeedArcs {
            u: spline(&row, u0)?,
            v: spline(&col, v0)?,
        })
    }
}

fn start_tangent(pts: &[Vec3]) -> Result<Vec3> {
    if pts.len() >= 3 {
        Ok(CircArc::from_three_points(pts[0], pts[1], pts[2])?.start_tangent())
    } else {
        Ok((pts[1] - pts[0]).normalize())
    }
}

fn spline(pts: &[Vec3], mut tangent: Vec3) -> Result<Vec<CircArc>> {
    let mut out = Vec::with_capacity(pts.len() - 1);
    for w in pts.windows(2) {
        let arc = CircArc::new(w[0], w[1], tangent)?;
        tangent = arc.tangent_at(1.0);
        out.push(arc);
    }
    Ok(out)
}

/// Refined net with diagnostics of the propagated arc splines.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularSubdivision {
    pub net: EuclidNet,
    /// Largest angle between consecutive arcs at an interior joint.
    pub max_joint_angle: f64,
    /// Largest |cos| between the u- and v-arcs leaving a vertex.
    pub max_orthogonality_defect: f64,
    /// Largest mismatch between reflected and propagated patch boundaries.
    pub max_closure_error: f64,
}

fn finite(p: &EPoint) -> Result<Vec3> {
    p.finite()
        .ok_or_else(|| Error::DegenerateArc("vertex at infinity".into()))
}

/// Laplace spheres (Y1 swapping x00↔x10, Y2 swapping x00↔x01) of a
/// circular quad (x00, x10, x01, x11).
fn laplace_spheres(quad: &[EPoint; 4]) -> Result<(HPoint, HPoint)> {
    let lifted = quad.map(|p| moebius_lift(&p));
    let ld = laplace_data(&lifted).map_err(|e| match e {
        Error::NonPlanarQuad => Error::NotConcyclic,
        other => other,
    })?;
    let q = QuadricForm::moebius();
    let mut out = [ld.y1, ld.y2];
    for y in out.iter_mut() {
        *y = y.normalize()?;
        if q.eval(y, y)? <= 1e-9 {
            return Err(Error::DegenerateLaplaceSphere);
        }
    }
    Ok((out[0], out[1]))
}

fn invert(y: &HPoint, p: &EPoint) -> Result<EPoint> {
    let q = QuadricForm::moebius();
    moebius_drop(&q.reflect(y, &moebius_lift(p))?)
}

fn invert_all(y: &HPoint, pts: &[EPoint], first: EPoint, last: EPoint) -> Result<Vec<EPoint>> {
    let n = pts.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    out.push(first);
    for p in &pts[1..n] {
        out.push(invert(y, p)?);
    }
    out.push(last);
    Ok(out)
}

/// Mirror taking the lifted points a0→a1 and b0→b1.
fn mirror(a0: &EPoint, a1: &EPoint, b0: &EPoint, b1: &EPoint) -> Result<HPoint> {
    let lift = |p: &EPoint| moebius_lift(p).normalize();
    let la = ProjLine::new(lift(a0)?, lift(a1)?)
        .map_err(|_| Error::DegenerateArc("repeated sample".into()))?;
    let lb = ProjLine::new(lift(b0)?, lift(b1)?)
        .map_err(|_| Error::DegenerateArc("repeated sample".into()))?;
    if la.same_as(&lb) {
        // the sample pair lies on the Laplace sphere itself
        let d = lift(a1)? - lift(a0)?;
        return Ok(d);
    }
    meet_lines(&la, &lb).map_err(|e| Error::DegenerateArc(format!("no mirror: {e}")))
}

/// Patch on a circular quad from samples `p` of the arc x00→x10 and `q` of
/// x00→x01, with the opposite boundaries given by inversion in the Laplace
/// spheres. Returns the patch and the largest closure error.
fn patch_from_samples(
    quad: &[EPoint; 4],
    spheres: (HPoint, HPoint),
    p: &[EPoint],
    q: &[EPoint],
) -> Result<(Grid<EPoint>, f64)> {
    let (y1, y2) = spheres;
    let [x00, x10, x01, x11] = *quad;
    let (n, m) = (p.len() - 1, q.len() - 1);
    let p1 = invert_all(&y2, p, x01, x11)?;
    let q1 = invert_all(&y1, q, x10, x11)?;
    let n1 = (0..n)
        .map(|k| mirror(&p[k], &p[k + 1], &p1[k], &p1[k + 1]))
        .collect::<Result<Vec<_>>>()?;
    let n2 = (0..m)
        .map(|l| mirror(&q[l], &q[l + 1], &q1[l], &q1[l + 1]))
        .collect::<Result<Vec<_>>>()?;
    let form = QuadricForm::moebius();
    for a in &n1 {
        for b in &n2 {
            if form.eval(a, b)?.abs() > MIRROR_TOL * a.norm() * b.norm() {
                return Err(Error::DegenerateArc(
                    "mirror families are not orthogonal".into(),
                ));
            }
        }
    }
    let orbit = reflection_orbit(&form, &n1, &n2, &moebius_lift(&x00).normalize()?, Exec::Sequential)?;
    let mut grid = orbit.try_map(|_, _, x| moebius_drop(x))?;
    let mut closure = 0.0f64;
    let mut pin = |g: &mut Grid<EPoint>, i: usize, j: usize, v: EPoint| {
        closure = closure.max(g.get(i, j).distance(&v));
        *g.get_mut(i, j) = v;
    };
    for k in 0..=n {
        pin(&mut grid, k, 0, p[k]);
        pin(&mut grid, k, m, p1[k]);
    }
    for l in 0..=m {
        pin(&mut grid, 0, l, q[l]);
        pin(&mut grid, n, l, q1[l]);
    }
    Ok((grid, closure))
}

fn check_ends(arc: &CircArc, a: &EPoint, b: &EPoint, what: &str) -> Result<()> {
    let (a, b) = (finite(a)?, finite(b)?);
    let scale = 1.0 + a.norm().max(b.norm());
    if (arc.start() - a).norm() > ENDPOINT_TOL * scale || (arc.end() - b).norm() > ENDPOINT_TOL * scale {
        return Err(Error::InvalidArgument(format!("{what} does not join its vertices")));
    }
    Ok(())
}

fn orthogonality(a: &CircArc, b: &CircArc) -> f64 {
    a.start_tangent().dot(&b.start_tangent()).abs()
}

fn arc_samples(arc: &CircArc, a: EPoint, b: EPoint, n: usize) -> Vec<EPoint> {
    let mut s: Vec<EPoint> = arc.samples(n).into_iter().map(EPoint::Finite).collect();
    s[0] = a;
    s[n] = b;
    s
}

/// The Dupin cyclide patch on a circular quad (x00, x10, x01, x11) adapted
/// to the arcs p0: x00→x10 and q0: x00→x01, sampled at `n_u`×`n_v`
/// uniform arc-length steps along p0 and q0.
pub fn adapted_cyclide_patch(
    quad: &[EPoint; 4],
    p0: &CircArc,
    q0: &CircArc,
    n_u: usize,
    n_v: usize,
) -> Result<EuclidNet> {
    if n_u == 0 || n_v == 0 {
        return Err(Error::InvalidArgument("segment counts must be positive".into()));
    }
    if !is_concyclic(quad)? {
        return Err(Error::NotConcyclic);
    }
    let [x00, x10, x01, _] = *quad;
    check_ends(p0, &x00, &x10, "p0")?;
    check_ends(q0, &x00, &x01, "q0")?;
    let cosine = orthogonality(p0, q0);
    if cosine >= ORTHOGONALITY_TOL {
        return Err(Error::ArcsNotOrthogonal { cosine });
    }
    let spheres = laplace_spheres(quad)?;
    let p = arc_samples(p0, x00, x10, n_u);
    let q = arc_samples(q0, x00, x01, n_v);
    let (grid, _) = patch_from_samples(quad, spheres, &p, &q)?;
    Ok(EuclidNet::new(grid))
}

fn validate_seeds(net: &EuclidNet, seeds: &SeedArcs) -> Result<()> {
    let (nu, nv) = net.dims();
    if seeds.u.len() != nu - 1 || seeds.v.len() != nv - 1 {
        return Err(Error::InvalidArgument(format!(
            "expected {} u-seeds and {} v-seeds",
            nu - 1,
            nv - 1
        )));
    }
    for (i, arc) in seeds.u.iter().enumerate() {
        check_ends(arc, &net.at(i, 0), &net.at(i + 1, 0), &format!("u-seed {i}"))?;
    }
    for (j, arc) in seeds.v.iter().enumerate() {
        check_ends(arc, &net.at(0, j), &net.at(0, j + 1), &format!("v-seed {j}"))?;
    }
    let joints = |arcs: &[CircArc], offset: usize| -> Result<()> {
        for k in 1..arcs.len() {
            let angle = angle_between(&arcs[k - 1].tangent_at(1.0), &arcs[k].start_tangent());
            if angle >= C1_TOL {
                return Err(Error::SeedArcsNotC1 {
                    index: offset + k,
                    angle,
                });
            }
        }
        Ok(())
    };
    let cosine = orthogonality(&seeds.u[0], &seeds.v[0]);
    if cosine >= ORTHOGONALITY_TOL {
        return Err(Error::ArcsNotOrthogonal { cosine });
    }
    joints(&seeds.u, 0)?;
    joints(&seeds.v, seeds.u.len())
}

struct Round {
    net: EuclidNet,
    u_arcs: Grid<CircArc>,
    v_arcs: Grid<CircArc>,
    joint: f64,
    ortho: f64,
    closure: f64,
}

fn refine(net: &EuclidNet, n_u: usize, n_v: usize, seeds: &SeedArcs, exec: Exec) -> Result<Round> {
    let (nu, nv) = net.dims();
    let quads: Vec<[EPoint; 4]> = (0..nu - 1)
        .flat_map(|i| (0..nv - 1).map(move |j| (i, j)))
        .map(|(i, j)| [net.at(i, j), net.at(i + 1, j), net.at(i, j + 1), net.at(i + 1, j + 1)])
        .collect();
    let spheres: Vec<Result<(HPoint, HPoint)>> = exec.map(quads.len(), |f| laplace_spheres(&quads[f]));
    let spheres = spheres.into_iter().collect::<Result<Vec<_>>>()?;
    let sph = |i: usize, j: usize| spheres[i * (nv - 1) + j];

    // propagate samples and arcs: u-edges upward, v-edges rightward
    let mut u_s: Vec<Vec<EPoint>> = Vec::with_capacity((nu - 1) * nv);
    let mut u_a: Vec<CircArc> = Vec::with_capacity((nu - 1) * nv);
    for i in 0..nu - 1 {
        let (a, b) = (net.at(i, 0), net.at(i + 1, 0));
        let mut s = arc_samples(&seeds.u[i], a, b, n_u);
        let mut arc = seeds.u[i];
        for j in 0..nv {
            if j > 0 {
                let y2 = sph(i, j - 1).1;
                let (a2, b2) = (net.at(i, j), net.at(i + 1, j));
                s = invert_all(&y2, &s, a2, b2)?;
                arc = arc.transform(|p| invert(&y2, p), Some((finite(&a2)?, finite(&b2)?)))?;
            }
            u_s.push(s.clone());
            u_a.push(arc);
        }
    }
    let u_s = Grid::new(nu - 1, nv, u_s)?;
    let u_a = Grid::new(nu - 1, nv, u_a)?;
    let mut v_s: Vec<Vec<EPoint>> = Vec::with_capacity(nu * (nv - 1));
    let mut v_a: Vec<CircArc> = Vec::with_capacity(nu * (nv - 1));
    let mut prev_s: Vec<Vec<EPoint>> = Vec::new();
    let mut prev_a: Vec<CircArc> = Vec::new();
    for i in 0..nu {
        for j in 0..nv - 1 {
            let (a, b) = (net.at(i, j), net.at(i, j + 1));
            let (s, arc) = if i == 0 {
                (arc_samples(&seeds.v[j], a, b, n_v), seeds.v[j])
            } else {
                let y1 = sph(i - 1, j).0;
                (
                    invert_all(&y1, &prev_s[j], a, b)?,
                    prev_a[j].transform(|p| invert(&y1, p), Some((finite(&a)?, finite(&b)?)))?,
                )
            };
            v_s.push(s);
            v_a.push(arc);
        }
        prev_s = v_s[i * (nv - 1)..].to_vec();
        prev_a = v_a[i * (nv - 1)..].to_vec();
    }
    let v_s = Grid::new(nu, nv - 1, v_s)?;
    let v_a = Grid::new(nu, nv - 1, v_a)?;

    let mut joint = 0.0f64;
    for j in 0..nv {
        for i in 1..nu - 1 {
            joint = joint.max(angle_between(&u_a.get(i - 1, j).tangent_at(1.0), &u_a.get(i, j).start_tangent()));
        }
    }
    for i in 0..nu {
        for j in 1..nv - 1 {
            joint = joint.max(angle_between(&v_a.get(i, j - 1).tangent_at(1.0), &v_a.get(i, j).start_tangent()));
        }
    }
    let mut ortho = 0.0f64;
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            ortho = ortho.max(orthogonality(u_a.get(i, j), v_a.get(i, j)));
        }
    }

    let patches: Vec<Result<(Grid<EPoint>, f64)>> = exec.map(quads.len(), |f| {
        let (i, j) = (f / (nv - 1), f % (nv - 1));
        patch_from_samples(&quads[f], spheres[f], u_s.get(i, j), v_s.get(i, j))
    });
    let (mu, mv) = ((nu - 1) * n_u + 1, (nv - 1) * n_v + 1);
    let mut data = vec![EPoint::Infinity; mu * mv];
    let mut closure = 0.0f64;
    for (f, patch) in patches.into_iter().enumerate() {
        let (patch, err) = patch?;
        closure = closure.max(err);
        let (i, j) = (f / (nv - 1), f % (nv - 1));
        for k in 1..n_u {
            for l in 1..n_v {
                data[(i * n_u + k) * mv + j * n_v + l] = *patch.get(k, l);
            }
        }
    }
    for i in 0..nu - 1 {
        for j in 0..nv {
            let s = u_s.get(i, j);
            for k in 1..n_u {
                data[(i * n_u + k) * mv + j * n_v] = s[k];
            }
        }
    }
    for i in 0..nu {
        for j in 0..nv - 1 {
            let s = v_s.get(i, j);
            for l in 1..n_v {
                data[i * n_u * mv + j * n_v + l] = s[l];
            }
        }
    }
    for i in 0..nu {
        for j in 0..nv {
            data[i * n_u * mv + j * n_v] = net.at(i, j);
        }
    }
    Ok(Round {
        net: EuclidNet::new(Grid::new(mu, mv, data)?),
        u_arcs: u_a,
        v_arcs: v_a,
        joint,
        ortho,
        closure,
    })
}

/// Seeds of the next round: the axis arcs cut at the sample parameters.
fn split_seeds(r: &Round, n_u: usize, n_v: usize) -> Result<SeedArcs> {
    let (ru, _) = r.u_arcs.dims();
    let (_, rv) = r.v_arcs.dims();
    let mut u = Vec::with_capacity(ru * n_u);
    for i in 0..ru {
        let arc = r.u_arcs.get(i, 0);
        for k in 0..n_u {
            u.push(arc.sub_arc(k as f64 / n_u as f64, (k + 1) as f64 / n_u as f64)?);
        }
    }
    let mut v = Vec::with_capacity(rv * n_v);
    for j in 0..rv {
        let arc = r.v_arcs.get(0, j);
        for l in 0..n_v {
            v.push(arc.sub_arc(l as f64 / n_v as f64, (l + 1) as f64 / n_v as f64)?);
        }
    }
    Ok(SeedArcs { u, v })
}

/// `rounds` rounds of circular subdivision with cyclide patches. Seed arcs
/// are propagated to every edge by inversion in the Laplace spheres of the
/// faces; later rounds use pieces of the axis arcs as seeds.
pub fn subdivide_circular(
    net: &EuclidNet,
    n_u: usize,
    n_v: usize,
    rounds: usize,
    seeds: &SeedArcs,
    exec: Exec,
) -> Result<CircularSubdivision> {
    if n_u == 0 || n_v == 0 {
        return Err(Error::InvalidArgument("segment counts must be positive".into()));
    }
    let (nu, nv) = net.dims();
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidArgument("net needs at least 2x2 vertices".into()));
    }
    if !is_circular_net(net) {
        return Err(Error::NotCircular);
    }
    validate_seeds(net, seeds)?;
    let mut out = CircularSubdivision {
        net: net.clone(),
        max_joint_angle: 0.0,
        max_orthogonality_defect: 0.0,
        max_closure_error: 0.0,
    };
    let mut seeds = seeds.clone();
    for r in 0..rounds {
        let round = refine(&out.net, n_u, n_v, &seeds, exec)?;
        out.max_joint_angle = out.max_joint_angle.max(round.joint);
        out.max_orthogonality_defect = out.max_orthogonality_defect.max(round.ortho);
        out.max_closure_error = out.max_closure_error.max(round.closure);
        if r + 1 < rounds {
            seeds = split_seeds(&round, n_u, n_v)?;
        }
        out.net = round.net;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circular::is_multi_circular;

    const R: f64 = 2.0;
    const RR: f64 = 0.7;

    fn torus(u: f64, v: f64) -> Vec3 {
        let w = R + RR * v.cos();
        Vec3::new(w * u.cos(), w * u.sin(), RR * v.sin())
    }

    fn torus_residual(p: &Vec3) -> f64 {
        let rho = (p.x * p.x + p.y * p.y).sqrt();
        ((rho - R).powi(2) + p.z * p.z - RR * RR).abs()
    }

    fn du(u: f64, v: f64) -> Vec3 {
        Vec3::new(-u.sin(), u.cos(), 0.0) * (R + RR * v.cos())
    }

    fn dv(u: f64, v: f64) -> Vec3 {
        Vec3::new(-v.sin() * u.cos(), -v.sin() * u.sin(), v.cos()) * RR
    }

    fn torus_case(us: &[f64], vs: &[f64]) -> (EuclidNet, SeedArcs) {
        let net = EuclidNet::from_points(&Grid::from_fn(us.len(), vs.len(), |i, j| torus(us[i], vs[j])));
        let v0 = vs[0];
        let u0 = us[0];
        let u = us
            .windows(2)
            .map(|w| CircArc::new(torus(w[0], v0), torus(w[1], v0), du(w[0], v0)).unwrap())
            .collect();
        let v = vs
            .windows(2)
            .map(|w| CircArc::new(torus(u0, w[0]), torus(u0, w[1]), dv(u0, w[0])).unwrap())
            .collect();
        (net, SeedArcs { u, v })
    }

    #[test]
    fn spline_seeds_refine_rotational_nets() {
        let net = crate::circular::sample_canonical(
            crate::circular::CanonicalKind::Rotational,
            &[(1.0, -0.5), (1.3, 0.0), (1.1, 0.6)],
            &[0.0, 0.5, 1.1],
        )
        .unwrap();
        let seeds = SeedArcs::spline(&net).unwrap();
        let out = subdivide_circular(&net, 2, 2, 1, &seeds, Exec::Sequential).unwrap();
        assert_eq!(out.net.dims(), (5, 5));
        assert!(is_circular_net(&out.net));
        assert!(out.max_joint_angle < 1e-6);
    }

    #[test]
    fn torus_patch_stays_on_torus() {
        let quad = [torus(0.1, 0.2), torus(0.6, 0.2), torus(0.1, 0.9), torus(0.6, 0.9)].map(EPoint::Finite);
        let p0 = CircArc::new(torus(0.1, 0.2), torus(0.6, 0.2), du(0.1, 0.2)).unwrap();
        let q0 = CircArc::new(torus(0.1, 0.2), torus(0.1, 0.9), dv(0.1, 0.2)).unwrap();
        let patch = adapted_cyclide_patch(&quad, &p0, &q0, 4, 3).unwrap();
        for k in 0..=4 {
            for l in 0..=3 {
                let expect = torus(0.1 + 0.125 * k as f64, 0.2 + 0.7 * l as f64 / 3.0);
                assert!(patch.at(k, l).distance(&EPoint::Finite(expect)) < 1e-9);
            }
        }
        assert!(is_multi_circular(&patch));
        assert_eq!(patch.at(4, 3), quad[3]);
    }

    #[test]
    fn planar_square() {
        let e = |x: f64, y: f64| EPoint::new(x, y, 0.0);
        let quad = [e(0., 0.), e(1., 0.), e(0., 1.), e(1., 1.)];
        let p0 = CircArc::new(Vec3::zeros(), Vec3::x(), Vec3::new(1., -1., 0.)).unwrap();
        let q0 = CircArc::new(Vec3::zeros(), Vec3::y(), Vec3::new(1., 1., 0.)).unwrap();
        let patch = adapted_cyclide_patch(&quad, &p0, &q0, 3, 3).unwrap();
        assert!(patch.grid().data().iter().all(|p| p.finite().unwrap().z.abs() < 1e-12));
        assert!(crate::circular::is_circular_net(&patch));
        let bad = CircArc::new(Vec3::zeros(), Vec3::y(), Vec3::new(1., 2., 0.)).unwrap();
        assert!(matches!(
            adapted_cyclide_patch(&quad, &p0, &bad, 3, 3),
            Err(Error::ArcsNotOrthogonal { .. })
        ));
        let off = [e(0., 0.), e(1., 0.), e(0., 1.), e(1.2, 1.)];
        assert_eq!(adapted_cyclide_patch(&off, &p0, &q0, 2, 2), Err(Error::NotConcyclic));
    }

    #[test]
    fn torus_net_refines_on_torus() {
        let (net, seeds) = torus_case(&[0.0, 0.5, 1.1], &[0.3, 1.0, 1.8]);
        let out = subdivide_circular(&net, 2, 2, 1, &seeds, Exec::Sequential).unwrap();
        assert_eq!(out.net.dims(), (5, 5));
        for p in out.net.grid().data() {
            assert!(torus_residual(&p.finite().unwrap()) < 1e-7);
        }
        assert!(crate::circular::is_circular_net(&out.net));
        assert!(out.max_joint_angle < 1e-6, "{}", out.max_joint_angle);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(out.net.at(2 * i, 2 * j), net.at(i, j));
            }
        }
        let two = subdivide_circular(&net, 2, 2, 2, &seeds, Exec::Parallel).unwrap();
        assert_eq!(two.net.dims(), (9, 9));
        for p in two.net.grid().data() {
            assert!(torus_residual(&p.finite().unwrap()) < 1e-7);
        }
    }

    #[test]
    fn seed_validation() {
        let (net, mut seeds) = torus_case(&[0.0, 0.5, 1.1], &[0.3, 1.0, 1.8]);
        let kinked = CircArc::new(torus(0.5, 0.3), torus(1.1, 0.3), du(0.5, 0.3) + dv(0.5, 0.3) * 0.1).unwrap();
        let good = seeds.u[1];
        seeds.u[1] = kinked;
        assert!(matches!(
            subdivide_circular(&net, 2, 2, 1, &seeds, Exec::Sequential),
            Err(Error::SeedArcsNotC1 { index: 1, .. })
        ));
        seeds.u[1] = good;
        seeds.v[0] = CircArc::new(torus(0.0, 0.3), torus(0.0, 1.0), dv(0.0, 0.3) + du(0.0, 0.3) * 0.1).unwrap();
        assert!(matches!(
            subdivide_circular(&net, 2, 2, 1, &seeds, Exec::Sequential),
            Err(Error::ArcsNotOrthogonal { .. })
        ));
    }
}
