//! Rectangular grids of points, planes and lines.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projective::{EPoint, HPoint, ProjLine, QuadricForm, Vec3};

/// Row-major grid, entry (i, j) at `i * nv + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    nu: usize,
    nv: usize,
    data: Vec<T>,
}

impl<T> Grid<T> {
    pub fn new(nu: usize, nv: usize, data: Vec<T>) -> Result<Self> {
        if nu == 0 || nv == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid dimensions must be positive, got {nu}x{nv}"
            )));
        }
        if data.len() != nu * nv {
            return Err(Error::DimensionMismatch {
                expected: nu * nv,
                got: data.len(),
            });
        }
        Ok(Grid { nu, nv, data })
    }

    pub fn from_fn(nu: usize, nv: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(nu * nv);
        for i in 0..nu {
            for j in 0..nv {
                data.push(f(i, j));
            }
        }
        Grid { nu, nv, data }
    }

    pub fn try_from_fn(
        nu: usize,
        nv: usize,
        mut f: impl FnMut(usize, usize) -> Result<T>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(nu * nv);
        for i in 0..nu {
            for j in 0..nv {
                data.push(f(i, j)?);
            }
        }
        Grid::new(nu, nv, data)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.nu, self.nv)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        debug_assert!(i < self.nu && j < self.nv);
        &self.data[i * self.nv + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.nv + j]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            nu: self.nu,
            nv: self.nv,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U>(&self, mut f: impl FnMut(usize, usize, &T) -> Result<U>) -> Result<Grid<U>> {
        let mut data = Vec::with_capacity(self.data.len());
        for (k, t) in self.data.iter().enumerate() {
            data.push(f(k / self.nv, k % self.nv, t)?);
        }
        Ok(Grid {
            nu: self.nu,
            nv: self.nv,
            data,
        })
    }

    pub fn transpose(&self) -> Grid<T>
    where
        T: Clone,
    {
        Grid::from_fn(self.nv, self.nu, |i, j| self.get(j, i).clone())
    }

    /// Sub-grid of rows `r0..r1` and columns `c0..c1`.
    pub fn window(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Grid<T>
    where
        T: Clone,
    {
        Grid::from_fn(r1 - r0, c1 - c0, |i, j| self.get(r0 + i, c0 + j).clone())
    }
}

/// The two parameter directions of a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// The first index i varies.
    U,
    /// The second index j varies.
    V,
}

/// Ambient space tag of a serialized or in-memory net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    RP2,
    RP3,
    /// Möbius space R^{4,1}.
    R41,
    /// Lie space R^{4,2}.
    R42,
    /// Plücker space R^{3,3}.
    R33,
    /// Euclidean R^3 ∪ {∞}.
    E3,
}

impl Ambient {
    /// Homogeneous dimension, `None` for E3.
    pub fn dim(self) -> Option<usize> {
        match self {
            Ambient::RP2 => Some(3),
            Ambient::RP3 => Some(4),
            Ambient::R41 => Some(5),
            Ambient::R42 | Ambient::R33 => Some(6),
            Ambient::E3 => None,
        }
    }

    pub fn form(self) -> Option<QuadricForm> {
        match self {
            Ambient::R41 => Some(QuadricForm::moebius()),
            Ambient::R42 => Some(QuadricForm::lie()),
            Ambient::R33 => Some(QuadricForm::pluecker()),
            _ => None,
        }
    }

    /// Projective tag for a bare homogeneous dimension.
    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            3 => Ok(Ambient::RP2),
            4 => Ok(Ambient::RP3),
            5 => Ok(Ambient::R41),
            6 => Ok(Ambient::R42),
            d => Err(Error::DimensionMismatch { expected: 4, got: d }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ambient::RP2 => "RP2",
            Ambient::RP3 => "RP3",
            Ambient::R41 => "R41",
            Ambient::R42 => "R42",
            Ambient::R33 => "R33",
            Ambient::E3 => "E3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "RP2" => Ambient::RP2,
            "RP3" => Ambient::RP3,
            "R41" => Ambient::R41,
            "R42" => Ambient::R42,
            "R33" => Ambient::R33,
            "E3" => Ambient::E3,
            _ => return None,
        })
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Grid of points of RP^n (homogeneous coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct PointNet {
    grid: Grid<HPoint>,
    ambient: Ambient,
}

impl PointNet {
    pub fn new(ambient: Ambient, grid: Grid<HPoint>) -> Result<Self> {
        let dim = ambient.dim().ok_or_else(|| {
            Error::InvalidArgument("point nets need a projective ambient tag".into())
        })?;
        for p in grid.data() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
        }
        Ok(PointNet { grid, ambient })
    }

    /// Tags the grid from the dimension of its points.
    pub fn from_grid(grid: Grid<HPoint>) -> Result<Self> {
        let ambient = Ambient::for_dim(grid.get(0, 0).dim())?;
        PointNet::new(ambient, grid)
    }

    pub fn grid(&self) -> &Grid<HPoint> {
        &self.grid
    }

    pub fn into_grid(self) -> Grid<HPoint> {
        self.grid
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn dims(&self) -> (usize, usize) {
        self.grid.dims()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> HPoint {
        *self.grid.get(i, j)
    }

    /// Quad with lower corner (i, j) in the order (x00, x10, x01, x11).
    pub fn quad(&self, i: usize, j: usize) -> [HPoint; 4] {
        [
            self.at(i, j),
            self.at(i + 1, j),
            self.at(i, j + 1),
            self.at(i + 1, j + 1),
        ]
    }

    /// Applies a linear map to every homogeneous coordinate vector.
    pub fn transform(&self, m: &nalgebra::DMatrix<f64>) -> Result<PointNet> {
        let grid = self.grid.try_map(|_, _, p| {
            let v = m * nalgebra::DVector::from_column_slice(p.as_slice());
            HPoint::new(v.as_slice())
        })?;
        PointNet::new(self.ambient, grid)
    }

    pub fn transpose(&self) -> PointNet {
        PointNet {
            grid: self.grid.transpose(),
            ambient: self.ambient,
        }
    }
}

/// Grid of planes of RP^3 stored as covectors (n1, n2, n3, d): the plane
/// n·x + d = 0. Covectors are kept as given, including orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneNet {
    grid: Grid<HPoint>,
}

impl PlaneNet {
    pub fn new(grid: Grid<HPoint>) -> Result<Self> {
        for p in grid.data() {
            if p.dim() != 4 {
                return Err(Error::DimensionMismatch {
                    expected: 4,
                    got: p.dim(),
                });
            }
        }
        Ok(PlaneNet { grid })
    }

    /// Planes n·x = offset given by normal and offset.
    pub fn from_normals(normals: &Grid<Vec3>, offsets: &Grid<f64>) -> Result<Self> {
        let (nu, nv) = normals.dims();
        if offsets.dims() != (nu, nv) {
            return Err(Error::DimensionMismatch {
                expected: nu * nv,
                got: offsets.data().len(),
            });
        }
        let grid = Grid::try_from_fn(nu, nv, |i, j| {
            let n = normals.get(i, j);
            HPoint::new(&[n.x, n.y, n.z, -offsets.get(i, j)])
        })?;
        PlaneNet::new(grid)
    }

    /// Dual net under the polarity x ↦ G x of a fixed form on R^4.
    pub fn polar_of(net: &PointNet, form: &QuadricForm) -> Result<Self> {
        if net.ambient().dim() != Some(4) {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: net.ambient().dim().unwrap_or(0),
            });
        }
        PlaneNet::new(net.grid().try_map(|_, _, p| form.polar(p))?)
    }

    pub fn grid(&self) -> &Grid<HPoint> {
        &self.grid
    }

    pub fn dims(&self) -> (usize, usize) {
        self.grid.dims()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> HPoint {
        *self.grid.get(i, j)
    }

    pub fn normal(&self, i: usize, j: usize) -> Vec3 {
        let c = self.at(i, j);
        Vec3::new(c[0], c[1], c[2])
    }

    /// Offset h of the plane n·x = h (with the stored, unnormalized n).
    pub fn offset(&self, i: usize, j: usize) -> f64 {
        -self.at(i, j)[3]
    }

    /// The covectors viewed as points of the dual space.
    pub fn as_dual_points(&self) -> PointNet {
        PointNet {
            grid: self.grid.clone(),
            ambient: Ambient::RP3,
        }
    }
}

/// Grid of points of R^3 ∪ {∞}.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclidNet {
    grid: Grid<EPoint>,
}

impl EuclidNet {
    pub fn new(grid: Grid<EPoint>) -> Self {
        EuclidNet { grid }
    }

    pub fn from_points(grid: &Grid<Vec3>) -> Self {
        EuclidNet {
            grid: grid.map(|p| EPoint::Finite(*p)),
        }
    }

    pub fn grid(&self) -> &Grid<EPoint> {
        &self.grid
    }

    pub fn dims(&self) -> (usize, usize) {
        self.grid.dims()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> EPoint {
        *self.grid.get(i, j)
    }

    pub fn map_points(&self, f: impl Fn(&EPoint) -> Result<EPoint>) -> Result<EuclidNet> {
        Ok(EuclidNet {
            grid: self.grid.try_map(|_, _, p| f(p))?,
        })
    }

    pub fn transpose(&self) -> EuclidNet {
        EuclidNet {
            grid: self.grid.transpose(),
        }
    }

    /// Möbius lift of every vertex.
    pub fn lift(&self) -> PointNet {
        PointNet {
            grid: self.grid.map(crate::projective::moebius_lift),
            ambient: Ambient::R41,
        }
    }

    /// Inverse of [`EuclidNet::lift`].
    pub fn drop_from(net: &PointNet) -> Result<EuclidNet> {
        Ok(EuclidNet {
            grid: net
                .grid()
                .try_map(|_, _, p| crate::projective::moebius_drop(p))?,
        })
    }

    /// Largest distance between corresponding finite vertices, infinite if
    /// the nets disagree on which vertices are at infinity.
    pub fn max_distance(&self, other: &EuclidNet) -> f64 {
        if self.dims() != other.dims() {
            return f64::INFINITY;
        }
        self.grid
            .data()
            .iter()
            .zip(other.grid.data())
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// Which quadric an isotropic line grid lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineModel {
    Lie,
    Pluecker,
}

impl LineModel {
    pub fn form(self) -> QuadricForm {
        match self {
            LineModel::Lie => QuadricForm::lie(),
            LineModel::Pluecker => QuadricForm::pluecker(),
        }
    }

    pub fn ambient(self) -> Ambient {
        match self {
            LineModel::Lie => Ambient::R42,
            LineModel::Pluecker => Ambient::R33,
        }
    }
}

/// Grid of isotropic lines (lines contained in the quadric of `model`).
#[derive(Debug, Clone, PartialEq)]
pub struct IsoLineGrid {
    grid: Grid<ProjLine>,
    model: LineModel,
}

/// Relative tolerance for the isotropy of stored spanning pairs.
pub const ISOTROPY_TOL: f64 = 1e-9;

impl IsoLineGrid {
    pub fn new(model: LineModel, grid: Grid<ProjLine>) -> Result<Self> {
        let q = model.form();
        let (_, nv) = grid.dims();
        for (k, l) in grid.data().iter().enumerate() {
            let (a, b) = (l.a.normalize()?, l.b.normalize()?);
            let worst = [q.eval(&a, &a)?, q.eval(&b, &b)?, q.eval(&a, &b)?]
                .iter()
                .fold(0.0f64, |m, v| m.max(v.abs()));
            if worst > ISOTROPY_TOL {
                return Err(Error::NotIsotropicLine {
                    i: k / nv,
                    j: k % nv,
                });
            }
        }
        Ok(IsoLineGrid { grid, model })
    }

    pub fn grid(&self) -> &Grid<ProjLine> {
        &self.grid
    }

    pub fn model(&self) -> LineModel {
        self.model
    }

    pub fn dims(&self) -> (usize, usize) {
        self.grid.dims()
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> ProjLine {
        *self.grid.get(i, j)
    }
}

/// A failed incidence check: the rectangle (or quad) rows `i0, i1`,
/// columns `j0, j1`, and the relative residual that exceeded tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub i0: usize,
    pub i1: usize,
    pub j0: usize,
    pub j1: usize,
    pub residual: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rows {}..{} cols {}..{} residual {:.3e}",
            self.i0, self.i1, self.j0, self.j1, self.residual
        )
    }
}

/// Enumerates all index pairs a < b below n.
pub(crate) fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push((a, b));
        }
    }
    out
}

/// All coordinate rectangles (i0, i1, j0, j1) of an nu x nv grid, in
/// lexicographic order.
pub(crate) fn rectangles(nu: usize, nv: usize) -> Vec<(usize, usize, usize, usize)> {
    let pu = pairs(nu);
    let pv = pairs(nv);
    let mut out = Vec::with_capacity(pu.len() * pv.len());
    for &(i0, i1) in &pu {
        for &(j0, j1) in &pv {
            out.push((i0, i1, j0, j1));
        }
    }
    out
}
