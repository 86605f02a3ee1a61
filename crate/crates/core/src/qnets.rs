//! Q-nets, multi-Q-nets, their Laplace data and Cauchy constructions, and
//! the dual plane nets.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::net::{rectangles, Ambient, Direction, Grid, PlaneNet, PointNet, Violation};
use crate::projective::{
    meet_lines, rank_residual, solve_combination, span_rank, HPoint, ProjLine, RankTol,
};

/// Relative residual above which a least-squares perspectivity solve is
/// rejected.
pub const PERSPECTIVITY_TOL: f64 = 1e-8;

/// Sums smaller than this fraction of their summands count as vanishing.
const ZERO_SUM_TOL: f64 = 1e-12;

/// Coefficients of x11 = a x10 + b x01 - c x00 and the Laplace points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceData {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Meet of the edge lines x00x10 and x01x11, represented as a x10 - c x00.
    pub y1: HPoint,
    /// Meet of the edge lines x00x01 and x10x11, represented as b x01 - c x00.
    pub y2: HPoint,
}

/// Planarity residual of four points: relative size of the fourth singular
/// value.
#[inline]
pub fn planarity_residual(pts: &[HPoint; 4]) -> f64 {
    rank_residual(pts, 3).unwrap_or(f64::INFINITY)
}

#[inline]
fn is_planar(pts: &[HPoint; 4]) -> bool {
    planarity_residual(pts) < RankTol::default().0
}

/// Laplace data of a planar quad given as (x00, x10, x01, x11).
pub fn laplace_data(quad: &[HPoint; 4]) -> Result<LaplaceData> {
    let tol = RankTol::default();
    if span_rank(quad, tol)? > 3 {
        return Err(Error::NonPlanarQuad);
    }
    for skip in 0..4 {
        let tri: Vec<HPoint> = (0..4).filter(|&k| k != skip).map(|k| quad[k]).collect();
        if span_rank(&tri, tol)? < 3 {
            return Err(Error::DegenerateQuad);
        }
    }
    let [x00, x10, x01, x11] = *quad;
    let (coef, _) = solve_combination(&[x10, x01, -x00], &x11);
    let (a, b, c) = (coef[0], coef[1], coef[2]);
    Ok(LaplaceData {
        a,
        b,
        c,
        y1: x10 * a - x00 * c,
        y2: x01 * b - x00 * c,
    })
}

fn quad_of(grid: &Grid<HPoint>, i0: usize, i1: usize, j0: usize, j1: usize) -> [HPoint; 4] {
    [
        *grid.get(i0, j0),
        *grid.get(i1, j0),
        *grid.get(i0, j1),
        *grid.get(i1, j1),
    ]
}

fn check_rect(grid: &Grid<HPoint>, r: (usize, usize, usize, usize)) -> Option<Violation> {
    let (i0, i1, j0, j1) = r;
    let residual = planarity_residual(&quad_of(grid, i0, i1, j0, j1));
    (residual >= RankTol::default().0).then_some(Violation {
        i0,
        i1,
        j0,
        j1,
        residual,
    })
}

fn elementary(nu: usize, nv: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..nu.saturating_sub(1) {
        for j in 0..nv.saturating_sub(1) {
            out.push((i, i + 1, j, j + 1));
        }
    }
    out
}

pub(crate) fn grid_violations(
    grid: &Grid<HPoint>,
    exhaustive: bool,
    exec: Exec,
) -> Vec<Violation> {
    let (nu, nv) = grid.dims();
    let rects = if exhaustive {
        rectangles(nu, nv)
    } else {
        elementary(nu, nv)
    };
    exec.filter_map(rects.len(), |k| check_rect(grid, rects[k]))
}

pub(crate) fn grid_first_violation(
    grid: &Grid<HPoint>,
    exhaustive: bool,
    exec: Exec,
) -> Option<Violation> {
    let (nu, nv) = grid.dims();
    let rects = if exhaustive {
        rectangles(nu, nv)
    } else {
        elementary(nu, nv)
    };
    exec.find_first(rects.len(), |k| check_rect(grid, rects[k]))
        .map(|(_, v)| v)
}

/// Non-planar elementary quads.
pub fn q_violations(net: &PointNet, exec: Exec) -> Vec<Violation> {
    grid_violations(net.grid(), false, exec)
}

pub fn is_q_net(net: &PointNet) -> bool {
    grid_first_violation(net.grid(), false, Exec::default()).is_none()
}

/// Non-planar coordinate rectangles, exhaustive over all index pairs.
pub fn multi_q_violations(net: &PointNet, exec: Exec) -> Vec<Violation> {
    grid_violations(net.grid(), true, exec)
}

/// Lexicographically first non-planar coordinate rectangle.
pub fn first_multi_q_violation(net: &PointNet, exec: Exec) -> Option<Violation> {
    grid_first_violation(net.grid(), true, exec)
}

pub fn is_multi_q_net(net: &PointNet) -> bool {
    is_multi_q_net_with(net, Exec::default())
}

pub fn is_multi_q_net_with(net: &PointNet, exec: Exec) -> bool {
    first_multi_q_violation(net, exec).is_none()
}

fn tag_for(p: &HPoint) -> Result<Ambient> {
    Ambient::for_dim(p.dim())
}

fn checked_sum(parts: &[HPoint], i: usize, j: usize) -> Result<HPoint> {
    let mut s = parts[0];
    let mut scale = parts[0].norm();
    for p in &parts[1..] {
        s = s + *p;
        scale += p.norm();
    }
    if s.max_abs() <= ZERO_SUM_TOL * scale {
        return Err(Error::ZeroSum { i, j });
    }
    Ok(s)
}

/// Translation net x_ij = [p_i + q_j].
pub fn from_translation(p: &[HPoint], q: &[HPoint]) -> Result<PointNet> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::InvalidArgument("empty generating curve".into()));
    }
    let dim = p[0].dim();
    for v in p.iter().chain(q) {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
    }
    let grid = Grid::try_from_fn(p.len(), q.len(), |i, j| checked_sum(&[p[i], q[j]], i, j))?;
    PointNet::new(tag_for(&p[0])?, grid)
}

/// Multi-Q-net x_ij = x00 + sum_{k<i} y1_k + sum_{l<j} y2_l.
pub fn from_cauchy_homogeneous(y1: &[HPoint], y2: &[HPoint], x00: &HPoint) -> Result<PointNet> {
    let dim = x00.dim();
    for v in y1.iter().chain(y2) {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
    }
    let (nu, nv) = (y1.len() + 1, y2.len() + 1);
    // prefix sums with accumulated magnitudes for the vanishing test
    let mut pu = vec![(HPoint::zeros(dim), 0.0)];
    for y in y1 {
        let (s, m) = *pu.last().unwrap();
        pu.push((s + *y, m + y.norm()));
    }
    let mut pv = vec![(HPoint::zeros(dim), 0.0)];
    for y in y2 {
        let (s, m) = *pv.last().unwrap();
        pv.push((s + *y, m + y.norm()));
    }
    let base = x00.norm();
    let grid = Grid::try_from_fn(nu, nv, |i, j| {
        let s = *x00 + pu[i].0 + pv[j].0;
        if s.max_abs() <= ZERO_SUM_TOL * (base + pu[i].1 + pv[j].1) {
            return Err(Error::ZeroSum { i, j });
        }
        Ok(s)
    })?;
    PointNet::new(tag_for(x00)?, grid)
}

/// Rescales `x` so that mu * other - lambda * x = target for the scalars
/// solving that system; returns lambda * x and mu * other.
fn perspective_gauge(
    x: &HPoint,
    other: &HPoint,
    target: &HPoint,
    what: &str,
) -> Result<(HPoint, HPoint)> {
    let (coef, res) = solve_combination(&[*other, -*x], target);
    let (mu, lambda) = (coef[0], coef[1]);
    let tiny = |s: f64, v: &HPoint| (s * v.norm()).abs() <= 1e-12 * target.norm();
    if res > PERSPECTIVITY_TOL || tiny(lambda, x) || tiny(mu, other) {
        return Err(Error::PerspectivityViolation(format!(
            "{what} (relative residual {res:.3e})"
        )));
    }
    Ok((*x * lambda, *other * mu))
}

/// The unique multi-Q-net extending a 2 x nv row strip and an nu x 2 column
/// strip that share their corner quad.
pub fn from_two_strips(strip1: &PointNet, strip2: &PointNet) -> Result<PointNet> {
    let (r1, nv) = strip1.dims();
    let (nu, c2) = strip2.dims();
    if r1 != 2 || c2 != 2 || nv < 2 || nu < 2 {
        return Err(Error::InvalidArgument(format!(
            "strips must be 2 x nv and nu x 2, got {r1}x{nv} and {nu}x{c2}"
        )));
    }
    if strip1.ambient() != strip2.ambient() {
        return Err(Error::InvalidArgument("strips live in different spaces".into()));
    }
    for (i, j) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        if !strip1.at(i, j).proj_eq(&strip2.at(i, j)) {
            return Err(Error::InconsistentCorner);
        }
    }
    let x00 = strip1.at(0, 0).normalize()?;
    let ld = laplace_data(&[x00, strip1.at(1, 0), strip1.at(0, 1), strip1.at(1, 1)])?;
    // gauge x~00 = x00: divide the Laplace equation by c
    let y1 = ld.y1 * (1.0 / ld.c);
    let y2 = ld.y2 * (1.0 / ld.c);

    let mut row0 = vec![x00];
    for j in 1..nv {
        let (xt, _) = perspective_gauge(
            &strip1.at(0, j),
            &strip1.at(1, j),
            &y1,
            &format!("row strip, column {j}"),
        )?;
        row0.push(xt);
    }
    let mut col0 = vec![x00];
    for i in 1..nu {
        let (xt, _) = perspective_gauge(
            &strip2.at(i, 0),
            &strip2.at(i, 1),
            &y2,
            &format!("column strip, row {i}"),
        )?;
        col0.push(xt);
    }
    let dy1: Vec<HPoint> = col0.windows(2).map(|w| w[1] - w[0]).collect();
    let dy2: Vec<HPoint> = row0.windows(2).map(|w| w[1] - w[0]).collect();
    let net = from_cauchy_homogeneous(&dy1, &dy2, &x00)?;
    PointNet::new(strip1.ambient(), net.into_grid())
}

/// Grids of Laplace points y1, y2 of every elementary quad, (nu-1) x (nv-1).
pub fn laplace_transforms(net: &PointNet) -> Result<(PointNet, PointNet)> {
    let (nu, nv) = net.dims();
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidArgument("net needs at least 2x2 vertices".into()));
    }
    let data = Grid::try_from_fn(nu - 1, nv - 1, |i, j| laplace_data(&net.quad(i, j)))?;
    let y1 = PointNet::new(net.ambient(), data.map(|d| d.y1))?;
    let y2 = PointNet::new(net.ambient(), data.map(|d| d.y2))?;
    Ok((y1, y2))
}

/// Whether the polygons i0 and i1 of `grid` (second index varying) are in
/// perspective from a single point.
fn polygons_perspective(grid: &Grid<HPoint>, i0: usize, i1: usize) -> bool {
    let (_, nv) = grid.dims();
    let tol = RankTol::default();
    for j in 0..nv - 1 {
        if !is_planar(&quad_of(grid, i0, i1, j, j + 1)) {
            return false;
        }
    }
    if nv < 3 {
        return true;
    }
    // pairs of coincident points impose no condition
    let lines: Vec<ProjLine> = (0..nv)
        .filter_map(|j| ProjLine::new(*grid.get(i0, j), *grid.get(i1, j)).ok())
        .collect();
    let Some(first) = lines.first() else {
        return true;
    };
    let Some(other) = lines.iter().find(|l| !l.same_as(first)) else {
        return true;
    };
    let center = match meet_lines(first, other) {
        Ok(c) => c,
        Err(_) => return false,
    };
    lines.iter().all(|l| {
        span_rank(&[center, l.a, l.b], tol).is_ok_and(|r| r <= 2)
    })
}

fn grid_perspective(grid: &Grid<HPoint>, neighbors_only: bool, exec: Exec) -> bool {
    let (nu, _) = grid.dims();
    let pairs: Vec<(usize, usize)> = if neighbors_only {
        (0..nu.saturating_sub(1)).map(|i| (i, i + 1)).collect()
    } else {
        crate::net::pairs(nu)
    };
    exec.find_first(pairs.len(), |k| {
        (!polygons_perspective(grid, pairs[k].0, pairs[k].1)).then_some(())
    })
    .is_none()
}

/// Every two parameter polygons of one direction (or only neighboring ones)
/// are in perspective from a point, checked in both directions.
pub fn is_perspective_net(net: &PointNet, neighbors_only: bool, exec: Exec) -> bool {
    grid_perspective(net.grid(), neighbors_only, exec)
        && grid_perspective(&net.grid().transpose(), neighbors_only, exec)
}

/// Whether the polygons of one direction are pairwise perspective.
pub fn is_perspective_in(net: &PointNet, dir: Direction, neighbors_only: bool) -> bool {
    match dir {
        Direction::U => grid_perspective(net.grid(), neighbors_only, Exec::default()),
        Direction::V => grid_perspective(&net.grid().transpose(), neighbors_only, Exec::default()),
    }
}

/// Q-net whose Laplace transforms degenerate to curves: y1 constant along
/// the second index, y2 constant along the first.
pub fn has_degenerate_laplace(net: &PointNet) -> bool {
    if !is_q_net(net) {
        return false;
    }
    let (y1, y2) = match laplace_transforms(net) {
        Ok(t) => t,
        Err(_) => return false,
    };
    let (mu, mv) = y1.dims();
    let tol = RankTol::default();
    let rows_const = (0..mu).all(|i| {
        let row: Vec<HPoint> = (0..mv).map(|j| y1.at(i, j)).collect();
        span_rank(&row, tol) == Ok(1)
    });
    let cols_const = (0..mv).all(|j| {
        let col: Vec<HPoint> = (0..mu).map(|i| y2.at(i, j)).collect();
        span_rank(&col, tol) == Ok(1)
    });
    rows_const && cols_const
}

/// Whether the net agrees projectively with the translation net rebuilt
/// from its own first row strip and first column strip.
pub fn has_translation_form(net: &PointNet) -> bool {
    let (nu, nv) = net.dims();
    if nu < 2 || nv < 2 {
        return true;
    }
    let s1 = PointNet::new(net.ambient(), net.grid().window(0, 2, 0, nv));
    let s2 = PointNet::new(net.ambient(), net.grid().window(0, nu, 0, 2));
    let rebuilt = match (s1, s2) {
        (Ok(a), Ok(b)) => match from_two_strips(&a, &b) {
            Ok(r) => r,
            Err(_) => return false,
        },
        _ => return false,
    };
    net.grid()
        .data()
        .iter()
        .zip(rebuilt.grid().data())
        .all(|(a, b)| a.proj_eq(b))
}

/// Verdicts of the equivalent characterizations of multi-Q-nets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiQCharacterization {
    pub planar_rectangles: bool,
    pub all_pairs_perspective: bool,
    pub neighbor_perspective: bool,
    pub translation_form: bool,
    pub degenerate_laplace: bool,
}

impl MultiQCharacterization {
    pub fn all_agree(&self) -> bool {
        let v = self.planar_rectangles;
        self.all_pairs_perspective == v
            && self.neighbor_perspective == v
            && self.translation_form == v
            && self.degenerate_laplace == v
    }
}

pub fn characterize(net: &PointNet, exec: Exec) -> MultiQCharacterization {
    MultiQCharacterization {
        planar_rectangles: is_multi_q_net_with(net, exec),
        all_pairs_perspective: is_perspective_net(net, false, exec),
        neighbor_perspective: is_perspective_net(net, true, exec),
        translation_form: has_translation_form(net),
        degenerate_laplace: has_degenerate_laplace(net),
    }
}

/// Non-concurrent coordinate rectangles of planes.
pub fn multi_qstar_violations(pn: &PlaneNet, exec: Exec) -> Vec<Violation> {
    grid_violations(pn.grid(), true, exec)
}

pub fn first_multi_qstar_violation(pn: &PlaneNet, exec: Exec) -> Option<Violation> {
    grid_first_violation(pn.grid(), true, exec)
}

/// Elementary plane quadruples that are not concurrent.
pub fn qstar_violations(pn: &PlaneNet, exec: Exec) -> Vec<Violation> {
    grid_violations(pn.grid(), false, exec)
}

pub fn is_qstar_net(pn: &PlaneNet) -> bool {
    grid_first_violation(pn.grid(), false, Exec::default()).is_none()
}

pub fn is_multi_qstar(pn: &PlaneNet) -> bool {
    first_multi_qstar_violation(pn, Exec::default()).is_none()
}

/// Planar parameter lines of a plane net: for any two parameter lines of
/// one direction, the lines P(i0, j) ∩ P(i1, j) lie in one plane. Checked
/// dually as concurrency of the covector lines.
pub fn check_planar_parameter_lines(pn: &PlaneNet) -> bool {
    let g = pn.grid();
    let exec = Exec::default();
    grid_perspective(g, false, exec) && grid_perspective(&g.transpose(), false, exec)
}

/// Every row and every column of vertices spans at most a plane.
pub fn parameter_lines_planar(net: &PointNet) -> bool {
    let (nu, nv) = net.dims();
    let tol = RankTol::default();
    let rows = (0..nu).all(|i| {
        let pts: Vec<HPoint> = (0..nv).map(|j| net.at(i, j)).collect();
        span_rank(&pts, tol).is_ok_and(|r| r <= 3)
    });
    let cols = (0..nv).all(|j| {
        let pts: Vec<HPoint> = (0..nu).map(|i| net.at(i, j)).collect();
        span_rank(&pts, tol).is_ok_and(|r| r <= 3)
    });
    rows && cols
}

/// Multi-Q-net whose Laplace points lie on two skew lines, so that all
/// parameter polygons are planar.
pub fn build_qqstar_net(
    line1: &ProjLine,
    line2: &ProjLine,
    y1: &[HPoint],
    y2: &[HPoint],
    x00: &HPoint,
) -> Result<PointNet> {
    let tol = RankTol::default();
    if span_rank(&[line1.a, line1.b, line2.a, line2.b], tol)? != 4 {
        return Err(Error::LinesNotSkew);
    }
    for (index, y) in y1.iter().enumerate() {
        if !line1.contains(y) {
            return Err(Error::PointOffLine { index });
        }
    }
    for (index, y) in y2.iter().enumerate() {
        if !line2.contains(y) {
            return Err(Error::PointOffLine {
                index: y1.len() + index,
            });
        }
    }
    if line1.contains(x00) || line2.contains(x00) {
        return Err(Error::InvalidArgument(
            "initial point lies on a Laplace line".into(),
        ));
    }
    from_cauchy_homogeneous(y1, y2, x00)
}
