//! Translation nets inside a quadric, generated by two mutually orthogonal
//! families of polar reflections.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::net::{Ambient, Grid, PointNet};
use crate::projective::{HPoint, QuadricForm, QUADRIC_TOL};
use crate::qnets::{first_multi_q_violation, laplace_transforms};

/// Relative tolerance for the orthogonality of Laplace points in
/// [`verify_polar_laplace`].
pub const POLARITY_TOL: f64 = 1e-8;

/// |<x,n>| below this fraction of |x||n| means the mirror fixes x.
const FIXED_POINT_TOL: f64 = 1e-12;

fn ambient_for(q: &QuadricForm) -> Result<Ambient> {
    if *q == QuadricForm::pluecker() {
        return Ok(Ambient::R33);
    }
    Ambient::for_dim(q.dim())
}

fn validate_mirrors(q: &QuadricForm, n1: &[HPoint], n2: &[HPoint]) -> Result<()> {
    for n in n1.iter().chain(n2) {
        let nn = q.eval(n, n)?;
        if nn.abs() < QUADRIC_TOL * n.dot(n) {
            return Err(Error::IsotropicMirror);
        }
    }
    for (i, a) in n1.iter().enumerate() {
        for (j, b) in n2.iter().enumerate() {
            if q.eval(a, b)?.abs() > QUADRIC_TOL * a.norm() * b.norm() {
                return Err(Error::MirrorsNotOrthogonal { i, j });
            }
        }
    }
    Ok(())
}

fn reflect_step(q: &QuadricForm, n: &HPoint, x: &HPoint, i: usize, j: usize) -> Result<HPoint> {
    let xn = q.eval_unchecked(x, n);
    if xn.abs() <= FIXED_POINT_TOL * x.norm() * n.norm() {
        return Err(Error::DegenerateOrbit { i, j });
    }
    Ok(q.reflect_unchecked(n, q.eval_unchecked(n, n), x))
}

/// Reflection orbit x_{i+1,j} = σ¹_i(x_{i,j}), x_{i,j+1} = σ²_j(x_{i,j})
/// without validating the mirror families.
pub(crate) fn reflection_orbit(
    q: &QuadricForm,
    n1: &[HPoint],
    n2: &[HPoint],
    x00: &HPoint,
    exec: Exec,
) -> Result<Grid<HPoint>> {
    let mut col = Vec::with_capacity(n1.len() + 1);
    col.push(*x00);
    for (i, n) in n1.iter().enumerate() {
        let next = reflect_step(q, n, &col[i], i, 0)?;
        col.push(next);
    }
    let rows: Vec<Result<Vec<HPoint>>> = exec.map(col.len(), |i| {
        let mut row = Vec::with_capacity(n2.len() + 1);
        row.push(col[i]);
        for (j, n) in n2.iter().enumerate() {
            let next = reflect_step(q, n, &row[j], i, j)?;
            row.push(next);
        }
        Ok(row)
    });
    let mut data = Vec::with_capacity(col.len() * (n2.len() + 1));
    for r in rows {
        data.extend(r?);
    }
    Grid::new(n1.len() + 1, n2.len() + 1, data)
}

/// Net x_ij = (σ¹_{i-1} ∘ … ∘ σ¹_0 ∘ σ²_{j-1} ∘ … ∘ σ²_0)(x00).
pub fn generate_by_reflections(
    q: &QuadricForm,
    n1: &[HPoint],
    n2: &[HPoint],
    x00: &HPoint,
) -> Result<PointNet> {
    generate_by_reflections_with(q, n1, n2, x00, Exec::default())
}

pub fn generate_by_reflections_with(
    q: &QuadricForm,
    n1: &[HPoint],
    n2: &[HPoint],
    x00: &HPoint,
    exec: Exec,
) -> Result<PointNet> {
    if q.quadric_residual(x00)? >= QUADRIC_TOL {
        return Err(Error::SeedNotOnQuadric);
    }
    validate_mirrors(q, n1, n2)?;
    let grid = reflection_orbit(q, n1, n2, x00, exec)?;
    PointNet::new(ambient_for(q)?, grid)
}

/// Largest projective distance between σ¹_i σ²_j x and σ²_j σ¹_i x over all
/// mirror pairs.
pub fn commutation_defect(
    q: &QuadricForm,
    n1: &[HPoint],
    n2: &[HPoint],
    x: &HPoint,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in n1 {
        for b in n2 {
            let ab = q.reflect(a, &q.reflect(b, x)?)?;
            let ba = q.reflect(b, &q.reflect(a, x)?)?;
            worst = worst.max(ab.proj_distance(&ba));
        }
    }
    Ok(worst)
}

/// Whether the Laplace curves of a multi-Q-net in the quadric are polar to
/// each other: <y¹_i, y²_j> = 0 for all i, j.
pub fn verify_polar_laplace(net: &PointNet, q: &QuadricForm) -> Result<bool> {
    let mut worst = 0.0f64;
    for p in net.grid().data() {
        worst = worst.max(q.quadric_residual(p)?);
    }
    if worst >= QUADRIC_TOL {
        return Err(Error::NotOnQuadric { residual: worst });
    }
    if first_multi_q_violation(net, Exec::default()).is_some() {
        return Err(Error::NotMultiQ);
    }
    let (y1, y2) = laplace_transforms(net)?;
    let (mu, mv) = y1.dims();
    for i in 0..mu {
        let a = y1.at(i, 0).normalize()?;
        for j in 0..mv {
            let b = y2.at(0, j).normalize()?;
            if q.eval(&a, &b)?.abs() > POLARITY_TOL {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qnets::is_multi_q_net;

    fn hp(c: &[f64]) -> HPoint {
        HPoint::new(c).unwrap()
    }

    #[test]
    fn single_quad_example() {
        let m = QuadricForm::moebius();
        let h = 0.5f64.sqrt();
        let x00 = hp(&[0., h, h, 0., 1.]);
        let net = generate_by_reflections(
            &m,
            &[HPoint::basis(5, 1)],
            &[HPoint::basis(5, 2)],
            &x00,
        )
        .unwrap();
        assert_eq!(net.dims(), (2, 2));
        let expect = [[h, h], [h, -h], [-h, h], [-h, -h]];
        let got: Vec<[f64; 2]> = net.grid().data().iter().map(|p| [p[1], p[2]]).collect();
        for (g, e) in got.iter().zip(&[expect[0], expect[1], expect[2], expect[3]]) {
            assert!((g[0] - e[0]).abs() < 1e-15 && (g[1] - e[1]).abs() < 1e-15);
        }
        assert!(verify_polar_laplace(&net, &m).unwrap());
    }

    #[test]
    fn validation_errors() {
        let m = QuadricForm::moebius();
        let h = 0.5f64.sqrt();
        let x00 = hp(&[0., h, h, 0., 1.]);
        let e = |k| HPoint::basis(5, k);
        assert_eq!(
            generate_by_reflections(&m, &[e(1)], &[e(1)], &x00),
            Err(Error::MirrorsNotOrthogonal { i: 0, j: 0 })
        );
        assert_eq!(
            generate_by_reflections(&m, &[hp(&[1., 0., 0., 0., 1.])], &[e(2)], &x00),
            Err(Error::IsotropicMirror)
        );
        assert_eq!(
            generate_by_reflections(&m, &[e(1)], &[e(2)], &e(0)),
            Err(Error::SeedNotOnQuadric)
        );
        // x00 is fixed by a mirror orthogonal to it
        assert_eq!(
            generate_by_reflections(&m, &[e(0)], &[e(2)], &x00),
            Err(Error::DegenerateOrbit { i: 0, j: 0 })
        );
    }

    #[test]
    fn coordinate_blocks_give_multi_q() {
        let m = QuadricForm::moebius();
        let n1: Vec<HPoint> = (0..6)
            .map(|k| {
                let t = 0.4 + 0.37 * k as f64;
                hp(&[t.cos(), t.sin(), 0., 0., 0.])
            })
            .collect();
        let n2: Vec<HPoint> = (0..6)
            .map(|k| {
                let t = 0.1 * k as f64;
                hp(&[0., 0., 1.0 + t, 0.3 - t, 0.2 + 0.5 * t])
            })
            .collect();
        let x00 = crate::projective::moebius_lift(&crate::projective::EPoint::new(0.3, -0.7, 0.2));
        let net = generate_by_reflections(&m, &n1, &n2, &x00).unwrap();
        assert_eq!(net.dims(), (7, 7));
        assert!(is_multi_q_net(&net));
        assert!(verify_polar_laplace(&net, &m).unwrap());
        assert!(commutation_defect(&m, &n1, &n2, &x00).unwrap() < 1e-10);
    }
}
