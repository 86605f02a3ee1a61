//! Multi line congruences in the Lie and Plücker quadrics.

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::net::{pairs, Grid, IsoLineGrid, LineModel, Violation};
use crate::projective::{
    meet_lines, rank_residual, span_rank, HPoint, ProjLine, RankTol, SubspaceSignature, Vec3,
    QUADRIC_TOL,
};

/// Lie coordinates (c, (|c|²-r²-1)/2, (|c|²-r²+1)/2, r) of the oriented
/// sphere with center c and signed radius r. Two spheres are in oriented
/// contact iff their coordinates are orthogonal.
pub fn lie_sphere(center: &Vec3, radius: f64) -> HPoint {
    let a = center.norm_squared() - radius * radius;
    HPoint::raw(&[
        center.x,
        center.y,
        center.z,
        (a - 1.0) / 2.0,
        (a + 1.0) / 2.0,
        radius,
    ])
    .expect("finite input")
}

/// Point sphere of p.
pub fn lie_point(p: &Vec3) -> HPoint {
    lie_sphere(p, 0.0)
}

/// Oriented plane ν·x = h (|ν| = 1 after normalization); it touches the
/// sphere (c, r) iff c·ν - h = r.
pub fn lie_plane(normal: &Vec3, offset: f64) -> Result<HPoint> {
    let len = normal.norm();
    if !(len > 0.0) {
        return Err(Error::ZeroVector);
    }
    let (n, h) = (normal / len, offset / len);
    HPoint::new(&[n.x, n.y, n.z, h, h, 1.0])
}

/// Contact element at p with unit normal n: the pencil spanned by the
/// point sphere of p and its tangent plane, oriented so that the spheres
/// centered at p - ρ n with radius ρ belong to it.
pub fn lie_contact_element(p: &Vec3, n: &Vec3) -> Result<ProjLine> {
    let n = n.normalize();
    ProjLine::new(lie_point(p), lie_plane(&-n, -n.dot(p))?)
}

/// Plücker coordinates of the line through a and b in the diagonal (3,3)
/// form: (d + m, d - m) with d = b - a and m = a × d.
pub fn pluecker_embed(a: &Vec3, b: &Vec3) -> Result<HPoint> {
    let d = b - a;
    if d.norm() <= 1e-15 * (1.0 + a.norm().max(b.norm())) {
        return Err(Error::CoincidentPoints);
    }
    let m = a.cross(&d);
    let (u, w) = (d + m, d - m);
    HPoint::new(&[u.x, u.y, u.z, w.x, w.y, w.z])
}

/// Whether the lines of RP3 with Plücker points `p1`, `p2` meet (possibly
/// at infinity): their reciprocal product vanishes.
pub fn pluecker_lines_meet(p1: &HPoint, p2: &HPoint) -> Result<bool> {
    let q = crate::projective::QuadricForm::pluecker();
    Ok(q.eval(p1, p2)?.abs() <= QUADRIC_TOL * p1.norm() * p2.norm())
}

/// Whether two lines of projective space meet.
pub fn lines_intersect(l1: &ProjLine, l2: &ProjLine) -> bool {
    span_rank(&[l1.a, l1.b, l2.a, l2.b], RankTol::default()).is_ok_and(|r| r <= 3)
}

fn intersect_residual(l1: &ProjLine, l2: &ProjLine) -> f64 {
    rank_residual(&[l1.a, l1.b, l2.a, l2.b], 3).unwrap_or(f64::INFINITY)
}

/// Row and column pairs of lines that do not meet.
pub fn congruence_violations(g: &IsoLineGrid, exec: Exec) -> Vec<Violation> {
    let checks = pair_checks(g);
    exec.filter_map(checks.len(), |k| check_pair(g, checks[k]))
}

fn pair_checks(g: &IsoLineGrid) -> Vec<(usize, usize, usize, usize)> {
    let (nu, nv) = g.dims();
    let mut out = Vec::new();
    for j in 0..nv {
        for (i0, i1) in pairs(nu) {
            out.push((i0, i1, j, j));
        }
    }
    for i in 0..nu {
        for (j0, j1) in pairs(nv) {
            out.push((i, i, j0, j1));
        }
    }
    out
}

fn check_pair(g: &IsoLineGrid, c: (usize, usize, usize, usize)) -> Option<Violation> {
    let (i0, i1, j0, j1) = c;
    let residual = intersect_residual(&g.at(i0, j0), &g.at(i1, j1));
    (residual >= RankTol::default().0).then_some(Violation {
        i0,
        i1,
        j0,
        j1,
        residual,
    })
}

/// Every two lines of a row, and every two lines of a column, intersect.
pub fn is_multi_congruence(g: &IsoLineGrid) -> bool {
    is_multi_congruence_with(g, Exec::default())
}

pub fn is_multi_congruence_with(g: &IsoLineGrid, exec: Exec) -> bool {
    let checks = pair_checks(g);
    exec.find_first(checks.len(), |k| check_pair(g, checks[k]))
        .is_none()
}

/// Generating point families with ℓ_ij = span(s1_i, s2_j).
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub s1: Vec<HPoint>,
    pub s2: Vec<HPoint>,
}

/// Whether the points span at most a plane on which the form vanishes.
fn totally_isotropic_plane(g: &IsoLineGrid, pts: &[HPoint]) -> Result<bool> {
    if span_rank(pts, RankTol::default())? > 3 {
        return Ok(false);
    }
    let sig = g.model().form().restricted_signature(pts)?;
    Ok(sig.plus == 0 && sig.minus == 0)
}

fn row_points(g: &IsoLineGrid, i: usize) -> Vec<HPoint> {
    let (_, nv) = g.dims();
    (0..nv).flat_map(|j| [g.at(i, j).a, g.at(i, j).b]).collect()
}

fn col_points(g: &IsoLineGrid, j: usize) -> Vec<HPoint> {
    let (nu, _) = g.dims();
    (0..nu).flat_map(|i| [g.at(i, j).a, g.at(i, j).b]).collect()
}

/// Recovers s1_i as the meet of ℓ(i,0), ℓ(i,1) and s2_j as the meet of
/// ℓ(0,j), ℓ(1,j), then checks ℓ_ij = span(s1_i, s2_j) and <s1_i, s2_j> = 0
/// for every cell.
pub fn factor_congruence(g: &IsoLineGrid) -> Result<Factorization> {
    let (nu, nv) = g.dims();
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2x2 lines".into()));
    }
    if !is_multi_congruence(g) {
        return Err(Error::NotMultiCongruence);
    }
    for i in 0..nu {
        if totally_isotropic_plane(g, &row_points(g, i))? {
            return Err(Error::PlanarFamily);
        }
    }
    for j in 0..nv {
        if totally_isotropic_plane(g, &col_points(g, j))? {
            return Err(Error::PlanarFamily);
        }
    }
    let meet = |a: ProjLine, b: ProjLine| -> Result<HPoint> {
        meet_lines(&a, &b).map_err(|_| Error::NotMultiCongruence)
    };
    let s1 = (0..nu)
        .map(|i| meet(g.at(i, 0), g.at(i, 1)))
        .collect::<Result<Vec<_>>>()?;
    let s2 = (0..nv)
        .map(|j| meet(g.at(0, j), g.at(1, j)))
        .collect::<Result<Vec<_>>>()?;
    let q = g.model().form();
    for i in 0..nu {
        for j in 0..nv {
            let l = g.at(i, j);
            if !l.contains(&s1[i]) || !l.contains(&s2[j]) || s1[i].proj_eq(&s2[j]) {
                return Err(Error::NotMultiCongruence);
            }
            if q.eval(&s1[i], &s2[j])?.abs() > QUADRIC_TOL {
                return Err(Error::NotMultiCongruence);
            }
        }
    }
    Ok(Factorization { s1, s2 })
}

/// Grid of lines span(s1_i, s2_j).
pub fn grid_from_factors(model: LineModel, s1: &[HPoint], s2: &[HPoint]) -> Result<IsoLineGrid> {
    let grid = Grid::try_from_fn(s1.len(), s2.len(), |i, j| ProjLine::new(s1[i], s2[j]))?;
    IsoLineGrid::new(model, grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CongruenceClass {
    DupinCyclide,
    Hyperboloid,
    Degenerate,
}

impl fmt::Display for CongruenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CongruenceClass::DupinCyclide => "DupinCyclide",
            CongruenceClass::Hyperboloid => "Hyperboloid",
            CongruenceClass::Degenerate => "Degenerate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceClassification {
    pub class: CongruenceClass,
    pub span1: SubspaceSignature,
    pub span2: SubspaceSignature,
}

fn lorentzian_3(sig: &SubspaceSignature) -> bool {
    sig.dim == 3 && sig.zero == 0 && ((sig.plus, sig.minus) == (2, 1) || (sig.plus, sig.minus) == (1, 2))
}

/// Class from the signatures of span(s1) and span(s2).
pub fn classify_congruence(g: &IsoLineGrid) -> Result<CongruenceClassification> {
    let f = factor_congruence(g)?;
    let q = g.model().form();
    let span1 = q.restricted_signature(&f.s1)?;
    let span2 = q.restricted_signature(&f.s2)?;
    let generic = f.s1.len() >= 3 && f.s2.len() >= 3 && lorentzian_3(&span1) && lorentzian_3(&span2);
    let class = match (generic, g.model()) {
        (false, _) => CongruenceClass::Degenerate,
        (true, LineModel::Lie) => CongruenceClass::DupinCyclide,
        (true, LineModel::Pluecker) => CongruenceClass::Hyperboloid,
    };
    Ok(CongruenceClassification { class, span1, span2 })
}

/// Contact elements of the torus with radii `big` > `small` > 0 at the
/// parameters (u_i, v_j) in Lie coordinates.
pub fn torus_contact_elements(big: f64, small: f64, us: &[f64], vs: &[f64]) -> Result<IsoLineGrid> {
    let grid = Grid::try_from_fn(us.len(), vs.len(), |i, j| {
        let (u, v) = (us[i], vs[j]);
        let n = Vec3::new(v.cos() * u.cos(), v.cos() * u.sin(), v.sin());
        let c = Vec3::new(big * u.cos(), big * u.sin(), 0.0);
        lie_contact_element(&(c + n * small), &n)
    })?;
    IsoLineGrid::new(LineModel::Lie, grid)
}

/// Pencils of the doubly ruled surface z = xy: the rulings through (s,0,0)
/// with direction (0,1,s) and through (0,t,0) with direction (1,0,t).
pub fn hyperboloid_rulings(ss: &[f64], ts: &[f64]) -> Result<IsoLineGrid> {
    let s1 = ss
        .iter()
        .map(|&s| pluecker_embed(&Vec3::new(s, 0.0, 0.0), &Vec3::new(s, 1.0, s)))
        .collect::<Result<Vec<_>>>()?;
    let s2 = ts
        .iter()
        .map(|&t| pluecker_embed(&Vec3::new(0.0, t, 0.0), &Vec3::new(1.0, t, t)))
        .collect::<Result<Vec<_>>>()?;
    grid_from_factors(LineModel::Pluecker, &s1, &s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::QuadricForm;

    #[test]
    fn lie_contact() {
        let q = QuadricForm::lie();
        let a = lie_sphere(&Vec3::new(0., 0., 0.), 1.0);
        let b = lie_sphere(&Vec3::new(3., 0., 0.), 2.0);
        let c = lie_sphere(&Vec3::new(3., 0., 0.), -2.0);
        assert!(q.eval(&a, &a).unwrap().abs() < 1e-15);
        assert!(q.eval(&a, &b).unwrap().abs() > 1e-3);
        assert!(q.eval(&a, &c).unwrap().abs() < 1e-14);
        let p = lie_plane(&Vec3::new(0., 0., 2.), 4.0).unwrap();
        // plane z = 2 touches the sphere of radius 1 at (0,0,3)
        let s = lie_sphere(&Vec3::new(0., 0., 3.), 1.0);
        assert!(q.eval(&p, &s).unwrap().abs() < 1e-15);
        assert!(q.eval(&p, &p).unwrap().abs() < 1e-15);
    }

    #[test]
    fn pluecker_examples() {
        let q = QuadricForm::pluecker();
        let x = pluecker_embed(&Vec3::zeros(), &Vec3::x()).unwrap();
        let y = pluecker_embed(&Vec3::zeros(), &Vec3::y()).unwrap();
        let skew = pluecker_embed(&Vec3::new(0., 1., 0.), &Vec3::new(0., 1., 1.)).unwrap();
        assert!(q.eval(&x, &y).unwrap().abs() < 1e-15);
        assert!(q.eval(&x, &skew).unwrap().abs() > 0.5);
        assert!(pluecker_lines_meet(&x, &y).unwrap());
        assert!(!pluecker_lines_meet(&x, &skew).unwrap());
        let l = pluecker_embed(&Vec3::new(1., 2., 3.), &Vec3::new(-2., 0.5, 4.)).unwrap();
        assert!(q.eval(&l, &l).unwrap().abs() < 1e-12);
        assert_eq!(
            pluecker_embed(&Vec3::x(), &Vec3::x()),
            Err(Error::CoincidentPoints)
        );
    }

    #[test]
    fn intersection_predicate() {
        let e = |k| HPoint::basis(6, k);
        let l1 = ProjLine::new(e(0), e(1)).unwrap();
        let l2 = ProjLine::new(e(1), e(2)).unwrap();
        let l3 = ProjLine::new(e(3), e(4)).unwrap();
        assert!(lines_intersect(&l1, &l2));
        assert!(!lines_intersect(&l1, &l3));
    }

    #[test]
    fn torus_is_dupin_cyclide() {
        let us: Vec<f64> = (0..4).map(|k| 0.4 * k as f64).collect();
        let vs: Vec<f64> = (0..5).map(|k| 0.3 + 0.5 * k as f64).collect();
        let g = torus_contact_elements(2.0, 0.6, &us, &vs).unwrap();
        assert!(is_multi_congruence(&g));
        let f = factor_congruence(&g).unwrap();
        // s1 are the tube spheres
        let tube = lie_sphere(&Vec3::new(2.0 * us[2].cos(), 2.0 * us[2].sin(), 0.0), 0.6);
        assert!(f.s1[2].proj_eq(&tube));
        let c = classify_congruence(&g).unwrap();
        assert_eq!(c.class, CongruenceClass::DupinCyclide, "{c:?}");
    }

    #[test]
    fn hyperboloid() {
        let ps: Vec<f64> = (0..5).map(|k| -1.0 + 0.5 * k as f64).collect();
        let g = hyperboloid_rulings(&ps, &ps).unwrap();
        assert!(is_multi_congruence(&g));
        let c = classify_congruence(&g).unwrap();
        assert_eq!(c.class, CongruenceClass::Hyperboloid, "{c:?}");
        let small = hyperboloid_rulings(&ps[..2], &ps).unwrap();
        assert_eq!(classify_congruence(&small).unwrap().class, CongruenceClass::Degenerate);
    }

    #[test]
    fn lines_through_a_point() {
        let dirs = |k: usize, a: f64| Vec3::new(a.cos(), a.sin(), 0.3 * k as f64 + 0.2);
        let s1 = (0..3)
            .map(|k| pluecker_embed(&Vec3::zeros(), &dirs(k, 0.7 * k as f64)))
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let s2 = (0..3)
            .map(|k| pluecker_embed(&Vec3::zeros(), &dirs(k + 3, 2.0 + 0.5 * k as f64)))
            .collect::<Result<Vec<_>>>()
            .unwrap();
        let g = grid_from_factors(LineModel::Pluecker, &s1, &s2).unwrap();
        assert_eq!(factor_congruence(&g), Err(Error::PlanarFamily));
    }

    #[test]
    fn random_lines_are_not_a_congruence() {
        let e = |k| HPoint::basis(6, k);
        let iso = |a: f64, b: f64| {
            let p = e(0) * a.cos() + e(1) * a.sin() + e(3);
            let r = e(2) + e(4) * b.cos() + e(5) * b.sin();
            ProjLine::new(p, r).unwrap()
        };
        // pairs of isotropic vectors from complementary blocks span isotropic lines
        let grid = Grid::from_fn(2, 2, |i, j| iso(0.3 + i as f64 + 0.7 * j as f64, 1.1 * j as f64 + 0.2 * i as f64));
        let g = IsoLineGrid::new(LineModel::Pluecker, grid).unwrap();
        assert!(!is_multi_congruence(&g));
        assert_eq!(factor_congruence(&g), Err(Error::NotMultiCongruence));
    }
}
