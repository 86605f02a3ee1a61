//! Homogeneous coordinates, diagonal quadric forms and rank-based incidence.
//!
//! Every incidence question (coplanarity, concurrency, concyclicity after a
//! lift) is reduced to the numerical rank of a small matrix of normalized
//! coordinate vectors. A singular value counts as zero iff it is below
//! [`RankTol`] times the largest one, so verdicts are scale free.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, Vector3};

use crate::error::{Error, Result};
use crate::linalg::Svd;

pub type Vec3 = Vector3<f64>;

/// Largest supported homogeneous dimension (R^{4,2} and R^{3,3}).
pub const MAX_DIM: usize = 6;

/// Coordinates with every magnitude below this are treated as the zero vector.
pub const ZERO_TOL: f64 = 1e-300;

/// Default relative threshold for quadric incidence and mirror isotropy.
pub const QUADRIC_TOL: f64 = 1e-9;

/// Eigenvalues below this fraction of the largest magnitude count as zero
/// when reading off the signature of a restricted form.
pub const EIGEN_TOL: f64 = 1e-7;

/// Relative singular value threshold used by [`span_rank`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankTol(pub f64);

impl Default for RankTol {
    fn default() -> Self {
        RankTol(1e-9)
    }
}

/// Homogeneous coordinate vector of a point of RP^n, n + 1 <= 6.
#[derive(Clone, Copy, PartialEq)]
pub struct HPoint {
    coords: [f64; MAX_DIM],
    len: u8,
}

impl HPoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        let p = Self::raw(coords)?;
        if p.max_abs() <= ZERO_TOL || !p.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(p)
    }

    /// Builds a vector without the zero check. Used for intermediate sums
    /// whose nonvanishing is verified by the caller.
    pub fn raw(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::DimensionMismatch {
                expected: MAX_DIM,
                got: coords.len(),
            });
        }
        let mut c = [0.0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Ok(HPoint {
            coords: c,
            len: coords.len() as u8,
        })
    }

    pub(crate) fn zeros(dim: usize) -> Self {
        HPoint {
            coords: [0.0; MAX_DIM],
            len: dim as u8,
        }
    }

    /// Unit basis vector e_k in R^dim.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut p = Self::zeros(dim);
        p.coords[k] = 1.0;
        p
    }

    /// Affine point (x, y, z) with weight 1.
    pub fn from_affine(p: &Vec3) -> Self {
        HPoint {
            coords: [p.x, p.y, p.z, 1.0, 0.0, 0.0],
            len: 4,
        }
    }

    /// Direction (x, y, z) as a point at infinity of RP^3.
    pub fn direction(d: &Vec3) -> Result<Self> {
        HPoint::new(&[d.x, d.y, d.z, 0.0])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.coords[..self.len as usize]
    }

    pub fn dot(&self, other: &HPoint) -> f64 {
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.as_slice().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.as_slice().iter().all(|c| c.is_finite())
    }

    /// Canonical representative: unit Euclidean norm, first nonzero
    /// coordinate positive.
    pub fn normalize(&self) -> Result<HPoint> {
        let m = self.max_abs();
        if m <= ZERO_TOL || !self.is_finite() {
            return Err(Error::ZeroVector);
        }
        // scale first to avoid overflow in the norm
        let scaled = *self * (1.0 / m);
        let mut unit = scaled * (1.0 / scaled.norm());
        let lead = unit
            .as_slice()
            .iter()
            .copied()
            .find(|c| c.abs() > 1e-12)
            .unwrap_or(0.0);
        if lead < 0.0 {
            unit = -unit;
        }
        Ok(unit)
    }

    /// Affine part (x/w, y/w, z/w) of a point of RP^3, `None` at infinity.
    pub fn affine(&self) -> Option<Vec3> {
        if self.dim() != 4 {
            return None;
        }
        let w = self.coords[3];
        if w.abs() <= 1e-14 * self.max_abs() {
            return None;
        }
        Some(Vec3::new(
            self.coords[0] / w,
            self.coords[1] / w,
            self.coords[2] / w,
        ))
    }

    /// Distance between canonical representatives, 0 iff projectively equal.
    pub fn proj_distance(&self, other: &HPoint) -> f64 {
        match (self.normalize(), other.normalize()) {
            (Ok(a), Ok(b)) => (a - b).norm().min((a + b).norm()),
            _ => f64::INFINITY,
        }
    }

    /// Projective equality decided by rank (one-dimensional span).
    pub fn proj_eq(&self, other: &HPoint) -> bool {
        self.dim() == other.dim()
            && (span_rank(&[*self, *other], RankTol::default()) == Ok(1))
    }
}

impl fmt::Debug for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoint{:?}", self.as_slice())
    }
}

impl Index<usize> for HPoint {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.as_slice()[k]
    }
}

impl Add for HPoint {
    type Output = HPoint;
    fn add(mut self, rhs: HPoint) -> HPoint {
        debug_assert_eq!(self.len, rhs.len);
        for k in 0..self.dim() {
            self.coords[k] += rhs.coords[k];
        }
        self
    }
}

impl Sub for HPoint {
    type Output = HPoint;
    fn sub(mut self, rhs: HPoint) -> HPoint {
        debug_assert_eq!(self.len, rhs.len);
        for k in 0..self.dim() {
            self.coords[k] -= rhs.coords[k];
        }
        self
    }
}

impl Mul<f64> for HPoint {
    type Output = HPoint;
    fn mul(mut self, s: f64) -> HPoint {
        for k in 0..self.dim() {
            self.coords[k] *= s;
        }
        self
    }
}

impl Neg for HPoint {
    type Output = HPoint;
    fn neg(self) -> HPoint {
        self * -1.0
    }
}

/// Rows of unit-normalized coordinate vectors.
fn normalized_rows(points: &[HPoint]) -> Result<DMatrix<f64>> {
    let dim = points[0].dim();
    let mut m = DMatrix::zeros(points.len(), dim);
    for (r, p) in points.iter().enumerate() {
        if p.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: p.dim(),
            });
        }
        let u = p.normalize()?;
        for c in 0..dim {
            m[(r, c)] = u[c];
        }
    }
    Ok(m)
}

/// Singular values (descending) of the matrix of normalized points.
pub fn singular_values(points: &[HPoint]) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    Ok(Svd::new(&normalized_rows(points)?).s)
}

/// Numerical rank of the span of `points`.
pub fn span_rank(points: &[HPoint], tol: RankTol) -> Result<usize> {
    let sv = singular_values(points)?;
    let top = sv[0];
    Ok(sv.iter().filter(|s| **s >= tol.0 * top).count())
}

/// Relative size of the `k`-th singular value (0-based), i.e. how far the
/// points are from spanning at most `k` dimensions. Zero when fewer than
/// `k + 1` singular values exist.
pub fn rank_residual(points: &[HPoint], k: usize) -> Result<f64> {
    let sv = singular_values(points)?;
    Ok(sv.get(k).map_or(0.0, |s| s / sv[0]))
}

/// Unit vector spanning the (numerical) kernel of the matrix whose columns
/// are `cols`. The matrix is padded with zero rows so the full right singular
/// basis is available even when there are more columns than rows.
pub(crate) fn null_vector(cols: &[HPoint]) -> Vec<f64> {
    let dim = cols[0].dim();
    let rows = dim.max(cols.len());
    let mut m = DMatrix::zeros(rows, cols.len());
    for (c, p) in cols.iter().enumerate() {
        for r in 0..dim {
            m[(r, c)] = p[r];
        }
    }
    let svd = Svd::new(&m);
    // rows >= columns, so V is square and its last column spans the kernel
    svd.v.column(cols.len() - 1).iter().copied().collect()
}

/// Least-squares solution of `sum_k x_k cols[k] = rhs` together with the
/// relative residual |A x - rhs| / |rhs|.
pub(crate) fn solve_combination(cols: &[HPoint], rhs: &HPoint) -> (Vec<f64>, f64) {
    let dim = rhs.dim();
    let mut a = DMatrix::zeros(dim, cols.len());
    for (c, p) in cols.iter().enumerate() {
        for r in 0..dim {
            a[(r, c)] = p[r];
        }
    }
    let b = nalgebra::DVector::from_column_slice(rhs.as_slice());
    let svd = Svd::new(&a);
    let x = svd.solve(&b, 1e-13 * svd.s[0]);
    let res = (&a * &x - &b).norm() / b.norm().max(ZERO_TOL);
    (x.iter().copied().collect(), res)
}

/// Line of projective space spanned by two distinct points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjLine {
    pub a: HPoint,
    pub b: HPoint,
}

impl ProjLine {
    pub fn new(a: HPoint, b: HPoint) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        if span_rank(&[a, b], RankTol::default())? != 2 {
            return Err(Error::CoincidentPoints);
        }
        Ok(ProjLine { a, b })
    }

    pub fn contains(&self, p: &HPoint) -> bool {
        span_rank(&[self.a, self.b, *p], RankTol::default()).is_ok_and(|r| r <= 2)
    }

    /// Projective equality of lines.
    pub fn same_as(&self, other: &ProjLine) -> bool {
        span_rank(&[self.a, self.b, other.a, other.b], RankTol::default()) == Ok(2)
    }
}

/// Intersection point of two coplanar, distinct lines.
pub fn meet_lines(l1: &ProjLine, l2: &ProjLine) -> Result<HPoint> {
    let pts = [l1.a, l1.b, l2.a, l2.b];
    match span_rank(&pts, RankTol::default())? {
        4.. => Err(Error::SkewLines),
        3 => {
            let (a, b) = (l1.a.normalize()?, l1.b.normalize()?);
            let (c, d) = (l2.a.normalize()?, l2.b.normalize()?);
            // alpha a + beta b - gamma c - delta d = 0
            let v = null_vector(&[a, b, -c, -d]);
            let p = a * v[0] + b * v[1];
            let q = c * v[2] + d * v[3];
            // average both representations for symmetry
            let s = if p.dot(&q) < 0.0 { -1.0 } else { 1.0 };
            (p + q * s).normalize()
        }
        _ => Err(Error::IdenticalLines),
    }
}

/// Diagonal symmetric bilinear form given by its signature entries.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct QuadricForm {
    diag: [i8; MAX_DIM],
    len: u8,
}

impl fmt::Debug for QuadricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadricForm{:?}", self.signature())
    }
}

impl QuadricForm {
    pub fn new(signature: &[i8]) -> Result<Self> {
        if signature.is_empty() || signature.len() > MAX_DIM {
            return Err(Error::DimensionMismatch {
                expected: MAX_DIM,
                got: signature.len(),
            });
        }
        if signature.iter().any(|s| !matches!(s, -1..=1)) {
            return Err(Error::InvalidArgument(
                "signature entries must be -1, 0 or +1".into(),
            ));
        }
        let mut diag = [0i8; MAX_DIM];
        diag[..signature.len()].copy_from_slice(signature);
        Ok(QuadricForm {
            diag,
            len: signature.len() as u8,
        })
    }

    /// Möbius form (+,+,+,+,-) on R^{4,1}.
    pub fn moebius() -> Self {
        Self::new(&[1, 1, 1, 1, -1]).unwrap()
    }

    /// Lie form (+,+,+,+,-,-) on R^{4,2}.
    pub fn lie() -> Self {
        Self::new(&[1, 1, 1, 1, -1, -1]).unwrap()
    }

    /// Plücker form (+,+,+,-,-,-) on R^{3,3}.
    pub fn pluecker() -> Self {
        Self::new(&[1, 1, 1, -1, -1, -1]).unwrap()
    }

    /// Möbius form (+,+,+,-) of the 2-sphere, R^{3,1}.
    pub fn moebius_s2() -> Self {
        Self::new(&[1, 1, 1, -1]).unwrap()
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(&vec![1; dim]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.len as usize
    }

    pub fn signature(&self) -> &[i8] {
        &self.diag[..self.len as usize]
    }

    fn check(&self, x: &HPoint) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.dim(),
            });
        }
        Ok(())
    }

    /// <x, y> = sum_k signature_k x_k y_k.
    pub fn eval(&self, x: &HPoint, y: &HPoint) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &HPoint, y: &HPoint) -> f64 {
        (0..self.dim())
            .map(|k| f64::from(self.diag[k]) * x[k] * y[k])
            .sum()
    }

    /// |<x,x>| / |x|^2, the scale-free distance of [x] from the quadric.
    pub fn quadric_residual(&self, x: &HPoint) -> Result<f64> {
        let q = self.eval(x, x)?;
        Ok(q.abs() / x.dot(x))
    }

    pub fn is_on_quadric(&self, x: &HPoint) -> Result<bool> {
        Ok(self.quadric_residual(x)? < QUADRIC_TOL)
    }

    /// Polar reflection x - 2 <x,n>/<n,n> n.
    pub fn reflect(&self, n: &HPoint, x: &HPoint) -> Result<HPoint> {
        self.check(n)?;
        self.check(x)?;
        let nn = self.eval_unchecked(n, n);
        if nn.abs() < QUADRIC_TOL * n.dot(n) {
            return Err(Error::IsotropicMirror);
        }
        Ok(self.reflect_unchecked(n, nn, x))
    }

    #[inline]
    pub(crate) fn reflect_unchecked(&self, n: &HPoint, nn: f64, x: &HPoint) -> HPoint {
        let xn = self.eval_unchecked(x, n);
        *x - *n * (2.0 * xn / nn)
    }

    /// The form applied to a vector, G x, i.e. the covector of the polar
    /// hyperplane of [x].
    pub fn polar(&self, x: &HPoint) -> Result<HPoint> {
        self.check(x)?;
        let mut out = *x;
        for k in 0..self.dim() {
            out.coords[k] *= f64::from(self.diag[k]);
        }
        Ok(out)
    }

    /// Signature of the form restricted to span(vectors).
    pub fn restricted_signature(&self, vectors: &[HPoint]) -> Result<SubspaceSignature> {
        for v in vectors {
            self.check(v)?;
        }
        let m = normalized_rows(vectors)?.transpose();
        let svd = Svd::new(&m);
        let u = svd.u;
        let top = svd.s[0];
        let keep: Vec<usize> = (0..svd.s.len())
            .filter(|&k| svd.s[k] >= RankTol::default().0 * top)
            .collect();
        let dim = keep.len();
        let mut gram = DMatrix::<f64>::zeros(dim, dim);
        for (a, &ka) in keep.iter().enumerate() {
            for (b, &kb) in keep.iter().enumerate() {
                gram[(a, b)] = (0..self.dim())
                    .map(|r| f64::from(self.diag[r]) * u[(r, ka)] * u[(r, kb)])
                    .sum::<f64>();
            }
        }
        let mut eigenvalues: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        // the basis is orthonormal and |diag| = 1, so eigenvalues live in
        // [-1, 1] and an absolute threshold is meaningful
        let (mut plus, mut minus, mut zero) = (0, 0, 0);
        for e in &eigenvalues {
            if e.abs() < EIGEN_TOL {
                zero += 1;
            } else if *e > 0.0 {
                plus += 1;
            } else {
                minus += 1;
            }
        }
        Ok(SubspaceSignature {
            dim,
            plus,
            minus,
            zero,
            eigenvalues,
        })
    }
}

/// Signature of a quadric form restricted to a linear subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSignature {
    pub dim: usize,
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
    /// Eigenvalues of the restricted Gram matrix in an orthonormal basis,
    /// descending.
    pub eigenvalues: Vec<f64>,
}

impl SubspaceSignature {
    pub fn is(&self, plus: usize, minus: usize, zero: usize) -> bool {
        self.plus == plus && self.minus == minus && self.zero == zero
    }
}

impl fmt::Display for SubspaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for _ in 0..self.plus {
            write!(f, "+")?;
        }
        for _ in 0..self.minus {
            write!(f, "-")?;
        }
        for _ in 0..self.zero {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// Point of R^3 ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EPoint {
    Finite(Vec3),
    Infinity,
}

impl EPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        EPoint::Finite(Vec3::new(x, y, z))
    }

    pub fn finite(&self) -> Option<Vec3> {
        match self {
            EPoint::Finite(p) => Some(*p),
            EPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, EPoint::Infinity)
    }

    /// Euclidean distance, 0 between two infinite points and +inf between a
    /// finite and the infinite point.
    pub fn distance(&self, other: &EPoint) -> f64 {
        match (self, other) {
            (EPoint::Finite(a), EPoint::Finite(b)) => (a - b).norm(),
            (EPoint::Infinity, EPoint::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl From<Vec3> for EPoint {
    fn from(p: Vec3) -> Self {
        EPoint::Finite(p)
    }
}

/// Inverse stereographic lift of R^3 ∪ {∞} onto the Möbius quadric of
/// R^{4,1}: p ↦ (2p, |p|^2 - 1, |p|^2 + 1), ∞ ↦ (0, 0, 0, 1, 1).
pub fn moebius_lift(p: &EPoint) -> HPoint {
    match p {
        EPoint::Finite(p) => {
            let r2 = p.norm_squared();
            HPoint {
                coords: [2.0 * p.x, 2.0 * p.y, 2.0 * p.z, r2 - 1.0, r2 + 1.0, 0.0],
                len: 5,
            }
        }
        EPoint::Infinity => HPoint {
            coords: [0.0, 0.0, 0.0, 1.0, 1.0, 0.0],
            len: 5,
        },
    }
}

/// Left inverse of [`moebius_lift`].
pub fn moebius_drop(x: &HPoint) -> Result<EPoint> {
    let q = QuadricForm::moebius();
    let res = q.quadric_residual(x)?;
    if res > 1e-8 {
        return Err(Error::NotOnQuadric { residual: res });
    }
    // orient so that the last coordinate is positive; x5 >= |x4| on the quadric
    let x = if x[4] < 0.0 { -*x } else { *x };
    let v = Vec3::new(x[0], x[1], x[2]);
    let scale = x.max_abs();
    if x[3] > 0.0 {
        // x5 - x4 = |v|^2 / (x5 + x4) avoids cancellation far from the origin
        let v2 = v.norm_squared();
        if v.norm() <= 1e-15 * scale {
            return Ok(EPoint::Infinity);
        }
        Ok(EPoint::Finite(v * ((x[4] + x[3]) / v2)))
    } else {
        Ok(EPoint::Finite(v / (x[4] - x[3])))
    }
}

/// Point of R^{4,1} representing the sphere |p - center| = radius.
pub fn sphere_rep(center: &Vec3, radius: f64) -> Result<HPoint> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "sphere radius must be positive, got {radius}"
        )));
    }
    let a = radius * radius - center.norm_squared();
    HPoint::new(&[
        -center.x,
        -center.y,
        -center.z,
        (1.0 + a) / 2.0,
        (a - 1.0) / 2.0,
    ])
}

/// Point of R^{4,1} representing the plane normal · p = offset (a sphere
/// through ∞).
pub fn plane_rep(normal: &Vec3, offset: f64) -> Result<HPoint> {
    let len = normal.norm();
    if len <= ZERO_TOL {
        return Err(Error::ZeroVector);
    }
    let n = normal / len;
    let d = offset / len;
    HPoint::new(&[n.x, n.y, n.z, d, d])
}

/// Euclidean reading of a point of R^{4,1} off the quadric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereGeom {
    Sphere { center: Vec3, radius: f64 },
    Plane { normal: Vec3, offset: f64 },
    /// <s,s> < 0: no real points.
    Imaginary,
}

pub fn decode_sphere(s: &HPoint) -> Result<SphereGeom> {
    let q = QuadricForm::moebius();
    let ss = q.eval(s, s)?;
    if ss < -QUADRIC_TOL * s.dot(s) {
        return Ok(SphereGeom::Imaginary);
    }
    let k = s[3] - s[4];
    let a = Vec3::new(s[0], s[1], s[2]);
    if k.abs() <= 1e-12 * s.max_abs() {
        let len = a.norm();
        if len <= ZERO_TOL {
            return Err(Error::ZeroVector);
        }
        return Ok(SphereGeom::Plane {
            normal: a / len,
            offset: s[3] / len,
        });
    }
    Ok(SphereGeom::Sphere {
        center: -a / k,
        radius: (ss.max(0.0)).sqrt() / k.abs(),
    })
}

/// Image of `p` under the Möbius reflection in the sphere represented by `s`.
pub fn invert_point(s: &HPoint, p: &EPoint) -> Result<EPoint> {
    let q = QuadricForm::moebius();
    moebius_drop(&q.reflect(s, &moebius_lift(p))?)
}
