//! Q-net subdivision: polylines on the edges, one translation patch per
//! face.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::net::{Ambient, Grid, PointNet};
use crate::projective::{solve_combination, span_rank, HPoint, RankTol};
use crate::qnets::{laplace_data, LaplaceData, PERSPECTIVITY_TOL};

/// Polylines on every edge of a net. `u` holds the edges (i,j)→(i+1,j) as a
/// (nu-1)×nv grid of `n_u + 1` points, `v` the edges (i,j)→(i,j+1) as a
/// nu×(nv-1) grid of `n_v + 1` points. Endpoints are the net's vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePolylines {
    pub n_u: usize,
    pub n_v: usize,
    pub u: Grid<Vec<HPoint>>,
    pub v: Grid<Vec<HPoint>>,
}

/// How the polylines on the two axes are chosen.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum SeedPolicy {
    /// Uniform samples in the face gauge x̂00 = c x00, x̂10 = a x10.
    #[default]
    Uniform,
    /// `row[i]` lies on edge (i,0)→(i+1,0), `col[j]` on (0,j)→(0,j+1).
    Given {
        row: Vec<Vec<HPoint>>,
        col: Vec<Vec<HPoint>>,
    },
}

fn face(net: &PointNet, i: usize, j: usize) -> Result<LaplaceData> {
    laplace_data(&net.quad(i, j))
}

/// Uniform samples between `x` and `y` with gauge weights `wx`, `wy`,
/// scaled so the weights sum to one.
fn gauge_samples(x: &HPoint, y: &HPoint, wx: f64, wy: f64, n: usize) -> Vec<HPoint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(*x);
    for k in 1..n {
        let t = k as f64 / n as f64;
        let (s, r) = ((1.0 - t) * wx, t * wy);
        out.push((*x * s + *y * r) * (1.0 / (s + r)));
    }
    out.push(*y);
    out
}

fn check_seed(poly: &[HPoint], x: &HPoint, y: &HPoint, n: usize, what: &str) -> Result<Vec<HPoint>> {
    if poly.len() != n + 1 {
        return Err(Error::InvalidArgument(format!(
            "{what}: expected {} points, got {}",
            n + 1,
            poly.len()
        )));
    }
    if !poly[0].proj_eq(x) || !poly[n].proj_eq(y) {
        return Err(Error::InvalidArgument(format!("{what}: endpoints differ from the edge")));
    }
    for (k, p) in poly.iter().enumerate() {
        if span_rank(&[*x, *y, *p], RankTol::default())? > 2 {
            return Err(Error::PointOffLine { index: k });
        }
    }
    let mut out = poly.to_vec();
    out[0] = *x;
    out[n] = *y;
    Ok(out)
}

/// Carries a polyline on the edge x→y across a face to the opposite edge
/// x'→y', where x̂ = wx x, ŷ = wy y and x̂' = wx' x', ŷ' = y' form the
/// face gauge: p = α x̂ + β ŷ goes to α x̂' + β ŷ'.
fn carry(poly: &[HPoint], x: &HPoint, y: &HPoint, x2: &HPoint, y2: &HPoint, w: [f64; 4]) -> Vec<HPoint> {
    let n = poly.len() - 1;
    let (xh, yh, xh2, yh2) = (*x * w[0], *y * w[1], *x2 * w[2], *y2 * w[3]);
    let mut out = Vec::with_capacity(n + 1);
    out.push(*x2);
    for p in &poly[1..n] {
        let (c, _) = solve_combination(&[xh, yh], p);
        let (s, r) = (c[0] * w[2], c[1] * w[3]);
        let q = xh2 * c[0] + yh2 * c[1];
        let total = s + r;
        out.push(if total.abs() > 1e-14 * (s.abs() + r.abs()) {
            q * (1.0 / total)
        } else {
            q
        });
    }
    out.push(*y2);
    out
}

/// Polylines with `n_u`, `n_v` segments on every edge of a Q-net. Axis
/// edges get seeds; the rest are projected across faces from their Laplace
/// points, so opposite polylines of each face are in perspective.
pub fn attach_edge_polylines(
    net: &PointNet,
    n_u: usize,
    n_v: usize,
    seeds: &SeedPolicy,
) -> Result<EdgePolylines> {
    let (nu, nv) = net.dims();
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidArgument("net needs at least 2x2 vertices".into()));
    }
    if n_u == 0 || n_v == 0 {
        return Err(Error::InvalidArgument("segment counts must be positive".into()));
    }
    let faces = Grid::try_from_fn(nu - 1, nv - 1, |i, j| face(net, i, j))?;

    let mut row = Vec::with_capacity(nu - 1);
    let mut col = Vec::with_capacity(nv - 1);
    match seeds {
        SeedPolicy::Uniform => {
            for i in 0..nu - 1 {
                let f = faces.get(i, 0);
                if f.c * f.a <= 0.0 {
                    return Err(Error::GaugeSignChange { i, j: 0 });
                }
                row.push(gauge_samples(&net.at(i, 0), &net.at(i + 1, 0), f.c, f.a, n_u));
            }
            for j in 0..nv - 1 {
                let f = faces.get(0, j);
                if f.c * f.b <= 0.0 {
                    return Err(Error::GaugeSignChange { i: 0, j });
                }
                col.push(gauge_samples(&net.at(0, j), &net.at(0, j + 1), f.c, f.b, n_v));
            }
        }
        SeedPolicy::Given { row: r, col: c } => {
            if r.len() != nu - 1 || c.len() != nv - 1 {
                return Err(Error::InvalidArgument(format!(
                    "expected {} row and {} column seeds",
                    nu - 1,
                    nv - 1
                )));
            }
            for (i, p) in r.iter().enumerate() {
                row.push(check_seed(p, &net.at(i, 0), &net.at(i + 1, 0), n_u, &format!("row seed {i}"))?);
            }
            for (j, p) in c.iter().enumerate() {
                col.push(check_seed(p, &net.at(0, j), &net.at(0, j + 1), n_v, &format!("column seed {j}"))?);
            }
        }
    }

    // u-edges sweep upward in j, v-edges rightward in i
    let mut u_data: Vec<Option<Vec<HPoint>>> = vec![None; (nu - 1) * nv];
    for (i, p) in row.into_iter().enumerate() {
        u_data[i * nv] = Some(p);
    }
    for j in 0..nv - 1 {
        for i in 0..nu - 1 {
            let f = faces.get(i, j);
            let prev = u_data[i * nv + j].as_ref().expect("filled in sweep order");
            let next = carry(
                prev,
                &net.at(i, j),
                &net.at(i + 1, j),
                &net.at(i, j + 1),
                &net.at(i + 1, j + 1),
                [f.c, f.a, f.b, 1.0],
            );
            u_data[i * nv + j + 1] = Some(next);
        }
    }
    let mut v_data: Vec<Option<Vec<HPoint>>> = vec![None; nu * (nv - 1)];
    for (j, p) in col.into_iter().enumerate() {
        v_data[j] = Some(p);
    }
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            let f = faces.get(i, j);
            let prev = v_data[i * (nv - 1) + j].as_ref().expect("filled in sweep order");
            let next = carry(
                prev,
                &net.at(i, j),
                &net.at(i, j + 1),
                &net.at(i + 1, j),
                &net.at(i + 1, j + 1),
                [f.c, f.b, f.a, 1.0],
            );
            v_data[(i + 1) * (nv - 1) + j] = Some(next);
        }
    }
    Ok(EdgePolylines {
        n_u,
        n_v,
        u: Grid::new(nu - 1, nv, u_data.into_iter().map(Option::unwrap).collect())?,
        v: Grid::new(nu, nv - 1, v_data.into_iter().map(Option::unwrap).collect())?,
    })
}

/// Scales `p0[k]` to p̂0[k] with p̂0[k] + y ∝ p1[k].
fn gauge_polyline(p0: &[HPoint], p1: &[HPoint], y: &HPoint, name: &str) -> Result<Vec<HPoint>> {
    let n = p0.len() - 1;
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let (c, res) = solve_combination(&[p0[k], *y], &p1[k]);
        let (alpha, beta) = (c[0], c[1]);
        let scale = p1[k].norm();
        if res > PERSPECTIVITY_TOL
            || (beta * y.norm()).abs() <= 1e-12 * scale
            || (alpha * p0[k].norm()).abs() <= 1e-12 * scale
        {
            return Err(Error::PerspectivityViolation(format!(
                "{name} sample {k} (relative residual {res:.3e})"
            )));
        }
        out.push(p0[k] * (alpha / beta));
    }
    Ok(out)
}

fn rescaled(p: HPoint) -> HPoint {
    let m = p.max_abs();
    if m > 0.0 {
        p * (1.0 / m)
    } else {
        p
    }
}

/// Interior of the patch as an (n_u-1)×(n_v-1) row-major block.
fn patch_interior(
    quad: &[HPoint; 4],
    p0: &[HPoint],
    p1: &[HPoint],
    q0: &[HPoint],
    q1: &[HPoint],
) -> Result<Vec<HPoint>> {
    let ld = laplace_data(quad)?;
    let p0h = gauge_polyline(p0, p1, &ld.y2, "p0/p1")?;
    let q0h = gauge_polyline(q0, q1, &ld.y1, "q0/q1")?;
    let x00h = quad[0] * ld.c;
    let (n, m) = (p0.len() - 1, q0.len() - 1);
    let mut out = Vec::with_capacity(n.saturating_sub(1) * m.saturating_sub(1));
    for k in 1..n {
        for l in 1..m {
            let f = p0h[k] + q0h[l] - x00h;
            if f.max_abs() <= 1e-12 * (p0h[k].norm() + q0h[l].norm()) {
                return Err(Error::ZeroSum { i: k, j: l });
            }
            out.push(rescaled(f));
        }
    }
    Ok(out)
}

/// The unique multi-Q patch (translation net in the face gauge) spanned by
/// a planar quad (x00, x10, x01, x11) and polylines p0: x00→x10,
/// p1: x01→x11, q0: x00→x01, q1: x10→x11, with p0, p1 in perspective from
/// the Laplace point y² and q0, q1 from y¹. Boundary rows and columns are
/// the input polylines.
pub fn adapted_q_patch(
    quad: &[HPoint; 4],
    p0: &[HPoint],
    p1: &[HPoint],
    q0: &[HPoint],
    q1: &[HPoint],
) -> Result<PointNet> {
    let (n, m) = (p0.len().saturating_sub(1), q0.len().saturating_sub(1));
    if n == 0 || m == 0 || p1.len() != n + 1 || q1.len() != m + 1 {
        return Err(Error::InvalidArgument("polyline lengths do not match".into()));
    }
    let [x00, x10, x01, x11] = *quad;
    let ends = [
        (&p0[0], &x00),
        (&p0[n], &x10),
        (&p1[0], &x01),
        (&p1[n], &x11),
        (&q0[0], &x00),
        (&q0[m], &x01),
        (&q1[0], &x10),
        (&q1[m], &x11),
    ];
    if ends.iter().any(|(a, b)| !a.proj_eq(b)) {
        return Err(Error::InvalidArgument("polyline endpoints differ from the quad".into()));
    }
    let inner = patch_interior(quad, p0, p1, q0, q1)?;
    let grid = Grid::from_fn(n + 1, m + 1, |k, l| {
        if l == 0 {
            p0[k]
        } else if l == m {
            p1[k]
        } else if k == 0 {
            q0[l]
        } else if k == n {
            q1[l]
        } else {
            inner[(k - 1) * (m - 1) + l - 1]
        }
    });
    let mut grid = grid;
    *grid.get_mut(0, 0) = x00;
    *grid.get_mut(n, 0) = x10;
    *grid.get_mut(0, m) = x01;
    *grid.get_mut(n, m) = x11;
    PointNet::new(Ambient::for_dim(x00.dim())?, grid)
}

/// One round of subdivision given the edge polylines.
fn refine(net: &PointNet, edges: &EdgePolylines, exec: Exec) -> Result<PointNet> {
    let (nu, nv) = net.dims();
    let (n_u, n_v) = (edges.n_u, edges.n_v);
    let faces: Vec<(usize, usize)> = (0..nu - 1)
        .flat_map(|i| (0..nv - 1).map(move |j| (i, j)))
        .collect();
    let interiors: Vec<Result<Vec<HPoint>>> = exec.map(faces.len(), |f| {
        let (i, j) = faces[f];
        patch_interior(
            &net.quad(i, j),
            edges.u.get(i, j),
            edges.u.get(i, j + 1),
            edges.v.get(i, j),
            edges.v.get(i + 1, j),
        )
    });
    let (mu, mv) = ((nu - 1) * n_u + 1, (nv - 1) * n_v + 1);
    let mut data = vec![HPoint::zeros(net.at(0, 0).dim()); mu * mv];
    for (f, inner) in interiors.into_iter().enumerate() {
        let inner = inner?;
        let (i, j) = faces[f];
        for k in 1..n_u {
            for l in 1..n_v {
                data[(i * n_u + k) * mv + j * n_v + l] = inner[(k - 1) * (n_v - 1) + l - 1];
            }
        }
    }
    for i in 0..nu - 1 {
        for j in 0..nv {
            let poly = edges.u.get(i, j);
            for k in 1..n_u {
                data[(i * n_u + k) * mv + j * n_v] = poly[k];
            }
        }
    }
    for i in 0..nu {
        for j in 0..nv - 1 {
            let poly = edges.v.get(i, j);
            for l in 1..n_v {
                data[(i * n_u) * mv + j * n_v + l] = poly[l];
            }
        }
    }
    for i in 0..nu {
        for j in 0..nv {
            data[(i * n_u) * mv + j * n_v] = net.at(i, j);
        }
    }
    PointNet::new(net.ambient(), Grid::new(mu, mv, data)?)
}

/// `rounds` rounds of subdivision with `n_u`×`n_v` patches per face. The
/// seed policy applies to the first round; later rounds use uniform seeds.
pub fn subdivide_q(
    net: &PointNet,
    n_u: usize,
    n_v: usize,
    rounds: usize,
    seeds: &SeedPolicy,
    exec: Exec,
) -> Result<PointNet> {
    let mut cur = net.clone();
    for r in 0..rounds {
        let policy = if r == 0 { seeds.clone() } else { SeedPolicy::Uniform };
        let edges = attach_edge_polylines(&cur, n_u, n_v, &policy)?;
        cur = refine(&cur, &edges, exec)?;
    }
    Ok(cur)
}

/// Whether both Laplace transforms of the net lie on lines, the discrete
/// counterpart of a patch with planar parameter curves (supercyclides are
/// the quadratic case).
pub fn laplace_transforms_collinear(net: &PointNet) -> Result<bool> {
    let (y1, y2) = crate::qnets::laplace_transforms(net)?;
    let tol = RankTol::default();
    Ok(span_rank(y1.grid().data(), tol)? <= 2 && span_rank(y2.grid().data(), tol)? <= 2)
}
