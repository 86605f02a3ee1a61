use thiserror::Error;

/// Errors raised by net constructions, predicates and I/O.
///
/// Genericity failures are reported here instead of being patched over with
/// silent fallbacks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector has no projective meaning")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("lines are skew")]
    SkewLines,
    #[error("lines coincide")]
    IdenticalLines,
    #[error("mirror point lies on the quadric")]
    IsotropicMirror,
    #[error("point is not on the quadric (residual {residual:.3e})")]
    NotOnQuadric { residual: f64 },
    #[error("quadrilateral is not planar")]
    NonPlanarQuad,
    #[error("degenerate quadrilateral (three collinear vertices)")]
    DegenerateQuad,
    #[error("homogeneous sum vanishes at ({i}, {j})")]
    ZeroSum { i: usize, j: usize },
    #[error("perspectivity violated: {0}")]
    PerspectivityViolation(String),
    #[error("strips disagree on the shared corner quad")]
    InconsistentCorner,
    #[error("point does not lie on the prescribed line (index {index})")]
    PointOffLine { index: usize },
    #[error("lines must be skew")]
    LinesNotSkew,
    #[error("net is not a multi-Q-net")]
    NotMultiQ,
    #[error("mirrors n1[{i}] and n2[{j}] are not orthogonal")]
    MirrorsNotOrthogonal { i: usize, j: usize },
    #[error("seed point is not on the quadric")]
    SeedNotOnQuadric,
    #[error("reflection orbit collapses at ({i}, {j})")]
    DegenerateOrbit { i: usize, j: usize },
    #[error("duplicate points")]
    DuplicatePoints,
    #[error("net is not circular")]
    NotCircular,
    #[error("net is not multi-circular")]
    NotMultiCircular,
    #[error("strip is degenerate (contained in a single circle)")]
    DegenerateStrip,
    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),
    #[error("plane has zero normal at ({i}, {j})")]
    ZeroNormal { i: usize, j: usize },
    #[error("planes are not concurrent")]
    NotConcurrent,
    #[error("point ({i}, {j}) is not on the unit sphere")]
    NotOnSphere { i: usize, j: usize },
    #[error("parallel net propagation is singular at quad ({i}, {j})")]
    SingularPropagation { i: usize, j: usize },
    #[error("points are not concyclic")]
    NotConcyclic,
    #[error("arcs are not orthogonal at the base vertex (cosine {cosine:.3e})")]
    ArcsNotOrthogonal { cosine: f64 },
    #[error("Laplace sphere is degenerate")]
    DegenerateLaplaceSphere,
    #[error("seed arcs are not tangent continuous at joint {index} (angle {angle:.3e} rad)")]
    SeedArcsNotC1 { index: usize, angle: f64 },
    #[error("degenerate arc: {0}")]
    DegenerateArc(String),
    #[error("line family is planar (isotropic plane)")]
    PlanarFamily,
    #[error("grid is not a multi line congruence")]
    NotMultiCongruence,
    #[error("line ({i}, {j}) is not isotropic")]
    NotIsotropicLine { i: usize, j: usize },
    #[error("points coincide")]
    CoincidentPoints,
    #[error("vertex ({i}, {j}) is at infinity")]
    InfiniteVertex { i: usize, j: usize },
    #[error("gauge changes sign along edge of face ({i}, {j}); edge passes through infinity")]
    GaugeSignChange { i: usize, j: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("schema violation: {0}")]
    SchemaViolation(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
