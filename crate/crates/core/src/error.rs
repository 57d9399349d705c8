use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate simplex: {0}")]
    DegenerateSimplex(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("plane z = {0} misses the solid")]
    EmptySection(f64),
    #[error("reference faces are required for flat-vertex classification")]
    MissingReferenceFaces,
    #[error("index mismatch: expected {expected} values, got {got}")]
    IndexMismatch { expected: usize, got: usize },
    #[error("cone triangulation degenerates at triangle {0:?}")]
    DegenerateCone([usize; 3]),
    #[error("edge lengths leave the domain: {0}")]
    DomainViolation(String),
    #[error("inadmissible displacement: {0}")]
    InadmissibleDisplacement(String),
    #[error("points are affinely dependent: {0}")]
    DegenerateConfiguration(String),
    #[error("point is not interior to the cell: {0}")]
    PointNotInterior(String),
    #[error("not a strictly convex bipyramid: {0}")]
    NotConvexBipyramid(String),
    #[error("genericity failure: {0}")]
    GenericityFailure(String),
    #[error("incompatible edge sets: {0}")]
    IncompatibleEdgeSets(String),
    #[error("invalid move: {0}")]
    InvalidMove(String),
    #[error("theta {0} is outside (-2pi/3, 2pi/3)")]
    ThetaOutOfRange(f64),
    #[error("tetrahedron cannot be classified: {0}")]
    CaseUnclassifiable(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),
    #[error("invalid triangulation: {0}")]
    Validation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
