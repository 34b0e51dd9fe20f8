use thiserror::Error;

/// Grid node given as (column, row) indices.
pub type Node = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is singular (|det| = {0:e})")]
    SingularMatrix(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("loop degree range [{lo}, {hi}] exceeds truncation order {order}")]
    TruncationOverflow { lo: i32, hi: i32, order: i32 },
    #[error("not in the big cell at {} node(s), first {:?}", .nodes.len(), .nodes.first())]
    NotInBigCell { nodes: Vec<Node> },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("grid too small: need at least {need} nodes per axis, got {got}")]
    GridTooSmall { need: usize, got: usize },
    #[error("degenerate derivative at {} node(s), first {:?}", .nodes.len(), .nodes.first())]
    DegenerateDerivative { nodes: Vec<Node> },
    #[error("singular Cauchy data: {0}")]
    SingularData(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Gauss map is not an immersion at {} node(s), first {:?}; use the Case 2 reconstruction", .nodes.len(), .nodes.first())]
    DegenerateGaussMap { nodes: Vec<Node> },
    #[error("degenerate omega: [nu_x, omega] vanishes at {} node(s)", .nodes.len())]
    DegenerateOmega { nodes: Vec<Node> },
    #[error("degenerate curve data: {0}")]
    DegenerateData(String),
    #[error("parallel surface is singular at every node")]
    FullySingular,
    #[error("singular angle: denominator {0:e}")]
    SingularAngle(f64),
    #[error("no real angle: K + 1 = {0} is not positive")]
    NoRealAngle(f64),
    #[error("degenerate tangent at {} node(s)", .nodes.len())]
    DegenerateTangent { nodes: Vec<Node> },
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status: 1 for bad input or configuration, 3 for numeric
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_) | Error::UnknownPreset(_) | Error::Parse(_) | Error::Io(_) => 1,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
