use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector has no primitive direction")]
    ZeroVector,

    #[error("empty point set")]
    EmptyInput,

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("polyhedron is unbounded: {0}")]
    Unbounded(String),

    #[error("polytope is not full-dimensional (dim {dim} in ambient dimension {ambient})")]
    NotFullDimensional { dim: i64, ambient: usize },

    #[error("face dimension {k} out of range 0..={n}")]
    FaceDimension { k: i64, n: usize },

    #[error("no Fine interior")]
    NoFineInterior,

    #[error("{0} is not a root of the facet-normal ray set")]
    NotARoot(String),

    #[error("lattice point {0} does not lie in the polytope")]
    PointOutside(String),

    #[error("degenerate support: Newton polytope of f differs from the given polytope")]
    DegenerateSupport,

    #[error(
        "degenerate coefficient choice: {{f}} together with the kernel basis has rank {got}, expected {expected}"
    )]
    DegenerateCoefficients { expected: usize, got: usize },

    #[error("axis index {index} out of range 1..={n}")]
    AxisOutOfRange { index: usize, n: usize },

    #[error("coefficient range must be at least 1, got {0}")]
    InvalidRange(i64),

    #[error("subfamily set is missing vertex {0}")]
    MissingVertex(String),

    #[error("point {0} is not a lattice point of the polytope")]
    NotInPolytope(String),

    #[error("polynomial term {0} lies outside the subfamily set")]
    TermOutsideSubfamily(String),

    #[error("candidate scale must be at least 1")]
    InvalidScale,

    #[error("zero polynomial has no Newton polytope")]
    ZeroPolynomial,

    #[error("height mismatch at {point}: iterative {iterative}, facet formula {facet}")]
    HeightMismatch {
        point: String,
        iterative: String,
        facet: String,
    },
}
