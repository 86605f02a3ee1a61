//! Conical and multi-conical plane nets through their Gauss maps.

use std::fmt;

use nalgebra::{Matrix3, Matrix4};

use crate::circular::{is_concyclic, is_multi_circular};
use crate::error::{Error, Result};
use crate::linalg::Svd;
use crate::exec::Exec;
use crate::net::{rectangles, EuclidNet, Grid, PlaneNet, PointNet};
use crate::projective::{span_rank, EPoint, HPoint, QuadricForm, RankTol, SubspaceSignature, Vec3};
use crate::qnets::{is_multi_qstar, laplace_data};

/// Allowed deviation of |p| from 1 for points on the unit sphere.
pub const SPHERE_TOL: f64 = 1e-9;

const ZERO_NORMAL_TOL: f64 = 1e-12;
const PROPAGATION_TOL: f64 = 1e-12;

fn unit_normal(c: &HPoint, i: usize, j: usize) -> Result<Vec3> {
    let n = Vec3::new(c[0], c[1], c[2]);
    if n.norm() <= ZERO_NORMAL_TOL * c.norm() {
        return Err(Error::ZeroNormal { i, j });
    }
    Ok(n.normalize())
}

/// Unit normals of the planes, with their stored orientation.
pub fn gauss_map(pn: &PlaneNet) -> Result<EuclidNet> {
    let g = pn.grid().try_map(|i, j, c| Ok(EPoint::Finite(unit_normal(c, i, j)?)))?;
    Ok(EuclidNet::new(g))
}

/// Whether four concurrent planes touch a common cone of revolution, i.e.
/// their unit normals are concyclic.
pub fn is_conical_quad(planes: &[HPoint; 4]) -> Result<bool> {
    if span_rank(planes, RankTol::default())? > 3 {
        return Err(Error::NotConcurrent);
    }
    let mut n = [EPoint::Infinity; 4];
    for (k, c) in planes.iter().enumerate() {
        n[k] = EPoint::Finite(unit_normal(c, k, 0)?);
    }
    is_concyclic(&n)
}

/// Multi-Q* with a multi-circular Gauss map.
pub fn is_multi_conical(pn: &PlaneNet) -> bool {
    if !is_multi_qstar(pn) {
        return false;
    }
    match gauss_map(pn) {
        Ok(g) => is_multi_circular(&g),
        Err(_) => false,
    }
}

/// Rectangle-by-rectangle version of [`is_multi_conical`].
pub fn is_multi_conical_reference(pn: &PlaneNet, exec: Exec) -> bool {
    let (nu, nv) = pn.dims();
    let rects = rectangles(nu, nv);
    exec.find_first(rects.len(), |k| {
        let (i0, i1, j0, j1) = rects[k];
        let q = [pn.at(i0, j0), pn.at(i1, j0), pn.at(i0, j1), pn.at(i1, j1)];
        match is_conical_quad(&q) {
            Ok(true) => None,
            _ => Some(()),
        }
    })
    .is_none()
}

fn check_on_sphere(net: &EuclidNet) -> Result<Grid<Vec3>> {
    net.grid().try_map(|i, j, p| match p {
        EPoint::Finite(x) if (x.norm() - 1.0).abs() < SPHERE_TOL => Ok(*x),
        _ => Err(Error::NotOnSphere { i, j }),
    })
}

/// Tangent planes p·x = 1 of the unit sphere at the vertices of a
/// multi-circular net in S².
pub fn polarize_spherical(net: &EuclidNet) -> Result<PlaneNet> {
    let pts = check_on_sphere(net)?;
    if !is_multi_circular(net) {
        return Err(Error::NotMultiCircular);
    }
    let (nu, nv) = pts.dims();
    PlaneNet::from_normals(&pts, &Grid::from_fn(nu, nv, |_, _| 1.0))
}

/// Plane net with the normals of `spherical` and offsets prescribed on the
/// first column (`d_row`, indexed by i) and first row (`d_col`, indexed by
/// j); the remaining offsets follow from concurrency of every elementary
/// quadruple.
pub fn parallel_conical_net(spherical: &PlaneNet, d_row: &[f64], d_col: &[f64]) -> Result<PlaneNet> {
    let (nu, nv) = spherical.dims();
    if d_row.len() != nu || d_col.len() != nv {
        return Err(Error::DimensionMismatch {
            expected: nu + nv,
            got: d_row.len() + d_col.len(),
        });
    }
    if d_row[0] != d_col[0] {
        return Err(Error::InvalidArgument(
            "d_row[0] and d_col[0] must agree".into(),
        ));
    }
    let normals = spherical
        .grid()
        .try_map(|i, j, c| unit_normal(c, i, j))?;
    let mut d = Grid::from_fn(nu, nv, |i, j| {
        if j == 0 {
            d_row[i]
        } else if i == 0 {
            d_col[j]
        } else {
            0.0
        }
    });
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let (n00, n10, n01, n11) = (
                normals.get(i, j),
                normals.get(i + 1, j),
                normals.get(i, j + 1),
                normals.get(i + 1, j + 1),
            );
            let det3 = Matrix3::from_rows(&[n00.transpose(), n10.transpose(), n01.transpose()])
                .determinant();
            if det3.abs() < PROPAGATION_TOL {
                return Err(Error::SingularPropagation { i, j });
            }
            let row = |n: &Vec3, h: f64| nalgebra::RowVector4::new(n.x, n.y, n.z, -h);
            let m = Matrix4::from_rows(&[
                row(n00, *d.get(i, j)),
                row(n10, *d.get(i + 1, j)),
                row(n01, *d.get(i, j + 1)),
                row(n11, 0.0),
            ]);
            // det is linear in the unknown offset with slope -det3
            *d.get_mut(i + 1, j + 1) = m.determinant() / det3;
        }
    }
    PlaneNet::from_normals(&normals, &d)
}

/// Vertex net of a plane net: the common point of each elementary quadruple
/// (least-squares intersection of the four planes).
pub fn quad_vertices(pn: &PlaneNet) -> Result<Grid<Vec3>> {
    let (nu, nv) = pn.dims();
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidArgument("need at least 2x2 planes".into()));
    }
    Grid::try_from_fn(nu - 1, nv - 1, |i, j| {
        let cs = [pn.at(i, j), pn.at(i + 1, j), pn.at(i, j + 1), pn.at(i + 1, j + 1)];
        let a = nalgebra::DMatrix::from_fn(4, 3, |r, c| cs[r][c]);
        let b = nalgebra::DVector::from_fn(4, |r, _| -cs[r][3]);
        let svd = Svd::new(&a);
        if svd.s[2] <= 1e-13 * svd.s[0] {
            return Err(Error::DegenerateQuad);
        }
        let x = svd.solve(&b, 0.0);
        Ok(Vec3::new(x[0], x[1], x[2]))
    })
}

/// Normal forms of multi-circular nets in S².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GaussClass {
    SymmetricStrip,
    Revolution,
    StereographicGrid,
    Degenerate,
}

impl fmt::Display for GaussClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GaussClass::SymmetricStrip => "SymmetricStrip",
            GaussClass::Revolution => "Revolution",
            GaussClass::StereographicGrid => "StereographicGrid",
            GaussClass::Degenerate => "Degenerate",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussClassification {
    pub class: GaussClass,
    pub span_u: SubspaceSignature,
    pub span_v: SubspaceSignature,
}

fn strip_circles(lifted: &PointNet, u_dir: bool) -> Result<Vec<HPoint>> {
    let (nu, nv) = lifted.dims();
    let count = if u_dir { nu - 1 } else { nv - 1 };
    (0..count)
        .map(|k| {
            let quad = if u_dir { lifted.quad(k, 0) } else { lifted.quad(0, k) };
            let ld = laplace_data(&quad)?;
            Ok(if u_dir { ld.y1 } else { ld.y2 })
        })
        .collect()
}

/// Class of a multi-circular net in S², from the signatures of the strip
/// circle spans in the Möbius model of S².
pub fn classify_gauss(net: &EuclidNet) -> Result<GaussClassification> {
    let (nu, nv) = net.dims();
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidArgument(format!(
            "classification needs at least 2x2 vertices, got {nu}x{nv}"
        )));
    }
    let pts = check_on_sphere(net)?;
    if !is_multi_circular(net) {
        return Err(Error::NotMultiCircular);
    }
    let lifted = PointNet::from_grid(pts.map(|p| HPoint::raw(&[p.x, p.y, p.z, 1.0]).expect("finite")))?;
    let q = QuadricForm::moebius_s2();
    let span_u = q.restricted_signature(&strip_circles(&lifted, true)?)?;
    let span_v = q.restricted_signature(&strip_circles(&lifted, false)?)?;
    let pair = |a: &SubspaceSignature, b: &SubspaceSignature| {
        (a.is(2, 0, 0) && b.is(1, 1, 0)) || (a.is(1, 1, 0) && b.is(2, 0, 0))
    };
    let class = if span_u.dim == 1 || span_v.dim == 1 {
        GaussClass::SymmetricStrip
    } else if pair(&span_u, &span_v) {
        GaussClass::Revolution
    } else if span_u.is(1, 0, 1) && span_v.is(1, 0, 1) {
        GaussClass::StereographicGrid
    } else {
        GaussClass::Degenerate
    };
    Ok(GaussClassification {
        class,
        span_u,
        span_v,
    })
}

/// Net of revolution on S²: vertex (cos φ_j cos θ_i, cos φ_j sin θ_i, sin φ_j)
/// for longitudes θ_i and latitudes φ_j.
pub fn sphere_revolution_net(longitudes: &[f64], latitudes: &[f64]) -> EuclidNet {
    let g = Grid::from_fn(longitudes.len(), latitudes.len(), |i, j| {
        let (t, f) = (longitudes[i], latitudes[j]);
        Vec3::new(f.cos() * t.cos(), f.cos() * t.sin(), f.sin())
    });
    EuclidNet::from_points(&g)
}

/// Inverse stereographic projection of the planar grid (x_i, y_j).
pub fn stereographic_grid(xs: &[f64], ys: &[f64]) -> EuclidNet {
    let g = Grid::from_fn(xs.len(), ys.len(), |i, j| {
        let (x, y) = (xs[i], ys[j]);
        let s = x * x + y * y;
        Vec3::new(2.0 * x, 2.0 * y, s - 1.0) / (s + 1.0)
    });
    EuclidNet::from_points(&g)
}

/// Two-row net whose second row is the mirror image of the first in the
/// equator.
pub fn symmetric_strip(row: &[Vec3]) -> EuclidNet {
    let g = Grid::from_fn(2, row.len(), |i, j| {
        let p = row[j].normalize();
        if i == 0 {
            p
        } else {
            Vec3::new(p.x, p.y, -p.z)
        }
    });
    EuclidNet::from_points(&g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn revolution() -> EuclidNet {
        let lon: Vec<f64> = (0..6).map(|k| 0.35 * k as f64).collect();
        let lat = [-0.9, -0.4, 0.1, 0.5, 0.8];
        sphere_revolution_net(&lon, &lat)
    }

    fn planes(cs: &[[f64; 4]; 4]) -> [HPoint; 4] {
        cs.map(|c| HPoint::new(&c).unwrap())
    }

    #[test]
    fn gauss_map_of_tangent_planes() {
        let net = revolution();
        let pn = polarize_spherical(&net).unwrap();
        let g = gauss_map(&pn).unwrap();
        assert!(g.max_distance(&net) < 1e-15);
        let flat = PlaneNet::from_normals(
            &Grid::from_fn(2, 2, |_, _| Vec3::new(0.0, 0.0, 2.0)),
            &Grid::from_fn(2, 2, |i, j| (i + j) as f64),
        )
        .unwrap();
        let g = gauss_map(&flat).unwrap();
        assert!(g.grid().data().iter().all(|p| p.distance(&EPoint::new(0., 0., 1.)) < 1e-15));
    }

    #[test]
    fn equator_planes_are_vertical() {
        let lon = [0.0, 0.7, 1.4];
        let net = sphere_revolution_net(&lon, &[0.0, 0.3]);
        let pn = polarize_spherical(&net).unwrap();
        for i in 0..3 {
            assert!(pn.at(i, 0)[2].abs() < 1e-15);
        }
    }

    #[test]
    fn conical_quads() {
        // tangent planes of the cone x² + y² = z² through the apex
        let cone = |t: f64| [t.cos(), t.sin(), -1.0, 0.0];
        assert!(is_conical_quad(&planes(&[cone(0.1), cone(0.9), cone(2.0), cone(4.0)])).unwrap());
        assert!(!is_conical_quad(&planes(&[
            [1., 0., 0., 0.],
            [0., 1., 0., 0.],
            [0., 0., 1., 0.],
            [1., 2., 3., 0.]
        ]))
        .unwrap());
        assert_eq!(
            is_conical_quad(&planes(&[
                [1., 0., 0., 0.],
                [0., 1., 0., 0.],
                [0., 0., 1., 0.],
                [1., 1., 1., 1.]
            ])),
            Err(Error::NotConcurrent)
        );
        // sphere tangents at concyclic points
        let net = sphere_revolution_net(&[0.0, 0.5, 1.0, 2.0], &[0.4]);
        let pn = polarize_spherical(&net).unwrap();
        assert!(is_conical_quad(&[pn.at(0, 0), pn.at(1, 0), pn.at(2, 0), pn.at(3, 0)]).unwrap());
    }

    #[test]
    fn spherical_nets_are_multi_conical() {
        for net in [
            revolution(),
            stereographic_grid(&[-1.0, -0.3, 0.2, 0.9], &[-0.5, 0.0, 0.7, 1.5]),
        ] {
            let pn = polarize_spherical(&net).unwrap();
            assert!(is_multi_conical(&pn));
            assert!(is_multi_conical_reference(&pn, Exec::Sequential));
        }
    }

    #[test]
    fn polarize_errors() {
        let off = EuclidNet::from_points(&Grid::from_fn(2, 2, |i, j| Vec3::new(i as f64, j as f64, 1.0)));
        assert_eq!(polarize_spherical(&off), Err(Error::NotOnSphere { i: 0, j: 1 }));
    }

    #[test]
    fn parallel_nets() {
        let pn = polarize_spherical(&revolution()).unwrap();
        let (nu, nv) = pn.dims();
        let same = parallel_conical_net(&pn, &vec![1.0; nu], &vec![1.0; nv]).unwrap();
        for (a, b) in same.grid().data().iter().zip(pn.grid().data()) {
            assert!(a.proj_distance(b) < 1e-12);
        }
        let shifted = parallel_conical_net(&pn, &vec![1.5; nu], &vec![1.5; nv]).unwrap();
        for i in 0..nu {
            for j in 0..nv {
                assert!((shifted.offset(i, j) - 1.5).abs() < 1e-12);
            }
        }
        let d_row: Vec<f64> = (0..nu).map(|i| 1.0 + 0.05 * (i as f64).sin()).collect();
        let mut d_col: Vec<f64> = (0..nv).map(|j| 1.0 + 0.07 * (j as f64 * 1.3).cos()).collect();
        d_col[0] = d_row[0];
        let par = parallel_conical_net(&pn, &d_row, &d_col).unwrap();
        assert!(is_multi_conical(&par));
        assert!(is_multi_conical_reference(&par, Exec::Sequential));
        assert!(gauss_map(&par).unwrap().max_distance(&gauss_map(&pn).unwrap()) < 1e-10);
        assert!(matches!(
            parallel_conical_net(&pn, &d_row, &vec![0.0; nv]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn gauss_classes() {
        assert_eq!(classify_gauss(&revolution()).unwrap().class, GaussClass::Revolution);
        let st = stereographic_grid(&[-1.0, -0.3, 0.2, 0.9], &[-0.5, 0.0, 0.7]);
        assert_eq!(classify_gauss(&st).unwrap().class, GaussClass::StereographicGrid);
        let strip = symmetric_strip(&[
            Vec3::new(1.0, 0.0, 0.5),
            Vec3::new(0.3, 1.0, 0.8),
            Vec3::new(-0.6, 0.4, 0.2),
        ]);
        assert_eq!(classify_gauss(&strip).unwrap().class, GaussClass::SymmetricStrip);
    }
}
