//! Seeded fixtures: random nets of every kind handled by the library.
//!
//! All generators draw from a [`ChaCha8Rng`], so a seed fixes the output
//! bit for bit on every platform.

use std::f64::consts::{PI, TAU};

use nalgebra::{Rotation3, Unit};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circular::{invert_net, sample_canonical, similarity, CanonicalKind};
use crate::congruences::{
    grid_from_factors, hyperboloid_rulings, pluecker_embed, torus_contact_elements,
};
use crate::conical::{sphere_revolution_net, stereographic_grid, symmetric_strip, GaussClass};
use crate::error::Result;
use crate::net::{Ambient, EuclidNet, Grid, IsoLineGrid, LineModel, PointNet};
use crate::projective::{moebius_lift, EPoint, HPoint, ProjLine, QuadricForm, Vec3};
use crate::subdivision::{CircArc, SeedArcs};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_vec(rng: &mut impl Rng, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(lo..hi)).collect()
}

fn sorted(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    // jittered stratified draws keep neighbours apart
    let h = (hi - lo) / n as f64;
    (0..n)
        .map(|k| lo + h * (k as f64 + rng.gen_range(0.15..0.85)))
        .collect()
}

pub fn random_vec3(rng: &mut impl Rng, lo: f64, hi: f64) -> Vec3 {
    Vec3::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

pub fn random_unit(rng: &mut impl Rng) -> Vec3 {
    loop {
        let v = random_vec3(rng, -1.0, 1.0);
        let n = v.norm();
        if n > 0.2 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Translation net x_ij = p_i + q_j with generators uniform in [-1, 1]^4.
pub fn random_translation_net(rng: &mut impl Rng, nu: usize, nv: usize) -> Result<PointNet> {
    let p = (0..nu)
        .map(|_| HPoint::new(&uniform_vec(rng, 4, -1.0, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    let q = (0..nv)
        .map(|_| HPoint::new(&uniform_vec(rng, 4, -1.0, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    crate::qnets::from_translation(&p, &q)
}

/// Q-net in RP3: an affine net with random boundary polygons and face
/// equations x11 = a x10 + b x01 - c x00 (a, b in [0.6, 1.4],
/// c = a + b - 1), moved by a random projective map. Generic draws are not
/// multi-Q.
pub fn random_q_net(rng: &mut impl Rng, nu: usize, nv: usize) -> Result<PointNet> {
    let mut pts = vec![Vec3::zeros(); nu * nv];
    for i in 0..nu {
        pts[i * nv] = Vec3::new(i as f64, 0.0, 0.0) + random_vec3(rng, -0.3, 0.3);
    }
    for j in 1..nv {
        pts[j] = Vec3::new(0.0, j as f64, 0.0) + random_vec3(rng, -0.3, 0.3);
    }
    for i in 1..nu {
        for j in 1..nv {
            let a = rng.gen_range(0.6..1.4);
            let b = rng.gen_range(0.6..1.4);
            let c = a + b - 1.0;
            pts[i * nv + j] = pts[i * nv + j - 1] * a + pts[(i - 1) * nv + j] * b
                - pts[(i - 1) * nv + j - 1] * c;
        }
    }
    let grid = Grid::new(nu, nv, pts.iter().map(HPoint::from_affine).collect())?;
    PointNet::new(Ambient::RP3, grid)?.transform(&random_projectivity(rng))
}

/// I + E with E uniform in [-0.1, 0.1]^{4x4}, keeping the net away from
/// the plane at infinity.
fn random_projectivity(rng: &mut impl Rng) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::identity(4, 4) + nalgebra::DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-0.1..0.1))
}

/// Reflection in a random non-isotropic vector of R^{4,1}.
fn random_moebius_reflection(rng: &mut impl Rng) -> HPoint {
    let q = QuadricForm::moebius();
    loop {
        let v = uniform_vec(rng, 5, -1.0, 1.0);
        let Ok(n) = HPoint::new(&v) else { continue };
        let nn = q.eval_unchecked(&n, &n);
        if nn.abs() > 0.3 * n.dot(&n) {
            return n;
        }
    }
}

/// Mirror families and seed for reflection-generated multi-Q-nets on the
/// Möbius quadric.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorFamilies {
    pub n1: Vec<HPoint>,
    pub n2: Vec<HPoint>,
    pub x00: HPoint,
}

/// Pencil planes through the z-axis against spheres centred on it, moved
/// by a random Möbius transformation. `m1`, `m2` mirrors.
pub fn random_mirror_families(rng: &mut impl Rng, m1: usize, m2: usize) -> Result<MirrorFamilies> {
    let q = QuadricForm::moebius();
    let mut n1 = Vec::with_capacity(m1);
    for k in 0..m1 {
        let t = PI * (k as f64 + rng.gen_range(0.2..0.8)) / m1 as f64;
        n1.push(HPoint::new(&[t.cos(), t.sin(), 0.0, 0.0, 0.0])?);
    }
    let mut n2 = Vec::with_capacity(m2);
    for _ in 0..m2 {
        let (a, r): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(0.5..1.5));
        let c = rng.gen_range(-0.5..0.5);
        let (s, t) = (a.sin() * r, a.cos() * r);
        n2.push(HPoint::new(&[0.0, 0.0, s, t, c])?);
    }
    let mut x00 = moebius_lift(&EPoint::Finite(Vec3::new(
        rng.gen_range(0.5..1.5),
        rng.gen_range(0.5..1.5),
        rng.gen_range(-0.5..0.5),
    )));
    for _ in 0..2 {
        let m = random_moebius_reflection(rng);
        let mm = q.eval_unchecked(&m, &m);
        for n in n1.iter_mut().chain(n2.iter_mut()) {
            *n = q.reflect_unchecked(&m, mm, n).normalize()?;
        }
        x00 = q.reflect_unchecked(&m, mm, &x00).normalize()?;
    }
    Ok(MirrorFamilies { n1, n2, x00 })
}

/// A sphere inversion (centre at distance 5 to 8 from the origin, radius
/// 1 to 3) followed by a similarity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub center: Vec3,
    pub radius: f64,
    pub rotation: Rotation3<f64>,
    pub scale: f64,
    pub translation: Vec3,
}

impl MoebiusMap {
    pub fn random(rng: &mut impl Rng) -> Self {
        let center = random_unit(rng) * rng.gen_range(5.0..8.0);
        let radius = rng.gen_range(1.0..3.0);
        let axis = Unit::new_normalize(random_unit(rng));
        MoebiusMap {
            center,
            radius,
            rotation: Rotation3::from_axis_angle(&axis, rng.gen_range(0.0..TAU)),
            scale: rng.gen_range(0.5..2.0),
            translation: random_vec3(rng, -1.0, 1.0),
        }
    }

    pub fn apply(&self, net: &EuclidNet) -> Result<EuclidNet> {
        let inv = invert_net(net, &self.center, self.radius)?;
        Ok(similarity(&inv, &self.rotation, self.scale, &self.translation))
    }
}

/// Random canonical multi-circular net with `nu` parameters and `nv`
/// profile points.
pub fn random_canonical(rng: &mut impl Rng, kind: CanonicalKind, nu: usize, nv: usize) -> Result<EuclidNet> {
    let (profile, params): (Vec<(f64, f64)>, Vec<f64>) = match kind {
        CanonicalKind::Rotational => {
            let zs = sorted(rng, nv, -1.0, 1.0);
            let profile = zs.iter().map(|&z| (rng.gen_range(0.8..2.0), z)).collect();
            (profile, sorted(rng, nu, 0.0, 1.5 * PI))
        }
        CanonicalKind::Cone => {
            let angles = sorted(rng, nv, 0.0, 1.5 * PI);
            let profile = angles
                .iter()
                .map(|&a| {
                    let r = rng.gen_range(0.3..0.7);
                    (r * a.cos(), r * a.sin())
                })
                .collect();
            (profile, sorted(rng, nu, 1.0, 3.0))
        }
        CanonicalKind::Cylinder => {
            let angles = sorted(rng, nv, 0.0, 1.5 * PI);
            let profile = angles
                .iter()
                .map(|&a| {
                    let r = rng.gen_range(0.7..1.3);
                    (r * a.cos(), r * a.sin())
                })
                .collect();
            (profile, sorted(rng, nu, -1.0, 1.0))
        }
    };
    sample_canonical(kind, &profile, &params)
}

/// Random spherical (Gauss map) net of the requested class.
pub fn random_spherical(rng: &mut impl Rng, class: GaussClass, nu: usize, nv: usize) -> EuclidNet {
    match class {
        GaussClass::Revolution => {
            sphere_revolution_net(&sorted(rng, nu, 0.0, 1.5 * PI), &sorted(rng, nv, -1.2, 1.2))
        }
        GaussClass::StereographicGrid => {
            stereographic_grid(&sorted(rng, nu, -1.5, 1.5), &sorted(rng, nv, -1.5, 1.5))
        }
        GaussClass::SymmetricStrip | GaussClass::Degenerate => {
            let row: Vec<Vec3> = sorted(rng, nv, 0.0, 1.5 * PI)
                .iter()
                .map(|&a| Vec3::new(a.cos(), a.sin(), rng.gen_range(0.3..0.8)))
                .collect();
            symmetric_strip(&row)
        }
    }
}

/// Offsets for [`crate::conical::parallel_conical_net`]: `d_row` along the
/// first column, `d_col` along the first row, sharing the corner value.
pub fn random_offsets(rng: &mut impl Rng, nu: usize, nv: usize) -> (Vec<f64>, Vec<f64>) {
    let d_row: Vec<f64> = (0..nu).map(|_| rng.gen_range(0.5..1.5)).collect();
    let mut d_col: Vec<f64> = (0..nv).map(|_| rng.gen_range(0.5..1.5)).collect();
    d_col[0] = d_row[0];
    (d_row, d_col)
}

/// Contact elements of a random torus along curvature lines.
pub fn random_torus_congruence(rng: &mut impl Rng, nu: usize, nv: usize) -> Result<IsoLineGrid> {
    let big = rng.gen_range(2.0..3.0);
    let small = rng.gen_range(0.3..0.8);
    torus_contact_elements(big, small, &sorted(rng, nu, 0.0, PI), &sorted(rng, nv, 0.0, 1.5 * PI))
}

/// Both rulings of z = xy sampled at random parameters.
pub fn random_hyperboloid(rng: &mut impl Rng, nu: usize, nv: usize) -> Result<IsoLineGrid> {
    hyperboloid_rulings(&sorted(rng, nu, -1.0, 1.0), &sorted(rng, nv, -1.0, 1.0))
}

/// Plücker grid of lines through one point: every pair of lines meets, but
/// the family spans an isotropic plane.
pub fn lines_through_point(rng: &mut impl Rng, center: &Vec3, nu: usize, nv: usize) -> Result<IsoLineGrid> {
    let mut fam = |n: usize| -> Result<Vec<HPoint>> {
        (0..n)
            .map(|_| pluecker_embed(center, &(center + random_unit(rng))))
            .collect()
    };
    let (s1, s2) = (fam(nu)?, fam(nv)?);
    grid_from_factors(LineModel::Pluecker, &s1, &s2)
}

/// Multi-Q-net whose Laplace points lie on two skew lines (planar
/// parameter polygons), in general position after a random projective map.
pub fn random_qqstar(rng: &mut impl Rng, nu: usize, nv: usize) -> Result<PointNet> {
    let m = nalgebra::Matrix4::<f64>::identity()
        + nalgebra::Matrix4::from_fn(|_, _| rng.gen_range(-0.3..0.3));
    let map = |c: [f64; 4]| -> Result<HPoint> {
        let v = m * nalgebra::Vector4::from(c);
        HPoint::new(v.as_slice())
    };
    let line1 = ProjLine::new(map([1.0, 0.0, 0.0, 0.0])?, map([0.0, 1.0, 0.0, 0.0])?)?;
    let line2 = ProjLine::new(map([0.0, 0.0, 1.0, 0.0])?, map([0.0, 0.0, 0.0, 1.0])?)?;
    let mut y = |n: usize, k: usize| -> Result<Vec<HPoint>> {
        (0..n.saturating_sub(1))
            .map(|_| {
                let mut c = [0.0; 4];
                c[k] = rng.gen_range(0.2..0.6);
                c[k + 1] = rng.gen_range(0.2..0.6);
                map(c)
            })
            .collect()
    };
    let (y1, y2) = (y(nu, 0)?, y(nv, 2)?);
    let x00 = map([
        rng.gen_range(0.5..1.5),
        rng.gen_range(0.5..1.5),
        rng.gen_range(0.5..1.5),
        rng.gen_range(0.5..1.5),
    ])?;
    crate::qnets::build_qqstar_net(&line1, &line2, &y1, &y2, &x00)
}

/// Torus of revolution about the z-axis with radii `big` > `small`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus {
    pub big: f64,
    pub small: f64,
}

impl Torus {
    pub fn point(&self, u: f64, v: f64) -> Vec3 {
        let w = self.big + self.small * v.cos();
        Vec3::new(w * u.cos(), w * u.sin(), self.small * v.sin())
    }

    pub fn du(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(-u.sin(), u.cos(), 0.0) * (self.big + self.small * v.cos())
    }

    pub fn dv(&self, u: f64, v: f64) -> Vec3 {
        Vec3::new(-v.sin() * u.cos(), -v.sin() * u.sin(), v.cos()) * self.small
    }

    /// |(ρ - R)² + z² - r²| for ρ the distance from the axis.
    pub fn residual(&self, p: &Vec3) -> f64 {
        let rho = (p.x * p.x + p.y * p.y).sqrt();
        ((rho - self.big).powi(2) + p.z * p.z - self.small * self.small).abs()
    }

    /// Curvature-line net at (u_i, v_j) with the exact circle arcs along
    /// the first row and column as seeds.
    pub fn net(&self, us: &[f64], vs: &[f64]) -> Result<(EuclidNet, SeedArcs)> {
        let net = EuclidNet::from_points(&Grid::from_fn(us.len(), vs.len(), |i, j| {
            self.point(us[i], vs[j])
        }));
        let (u0, v0) = (us[0], vs[0]);
        let u = us
            .windows(2)
            .map(|w| CircArc::new(self.point(w[0], v0), self.point(w[1], v0), self.du(w[0], v0)))
            .collect::<Result<Vec<_>>>()?;
        let v = vs
            .windows(2)
            .map(|w| CircArc::new(self.point(u0, w[0]), self.point(u0, w[1]), self.dv(u0, w[0])))
            .collect::<Result<Vec<_>>>()?;
        Ok((net, SeedArcs { u, v }))
    }
}
