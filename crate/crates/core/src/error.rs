use thiserror::Error;

/// Errors produced by the exact and numerical layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid structure constant c[{i},{j}]^{k}: {reason}")]
    InvalidConstant {
        i: usize,
        j: usize,
        k: usize,
        reason: String,
    },

    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: usize, max: usize },

    #[error("degree {degree} exceeds the permutation cap {cap}")]
    PermutationCap { degree: usize, cap: usize },

    #[error("form of degree {form} on a {dim}-dimensional algebra does not match")]
    FormMismatch { form: usize, dim: usize },

    #[error("cochain is not closed")]
    NotClosed,

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("sections live on different charts")]
    ChartMismatch,

    #[error("point is within {margin} of the chart boundary")]
    NearBoundary { margin: f64 },

    #[error("frame is degenerate at {point:?}: |det| = {det:e}")]
    DegenerateFrame { point: Vec<f64>, det: f64 },

    #[error("singular translation jacobian at {0:?}")]
    SingularJacobian(Vec<f64>),

    #[error("multiplication violates the identity law by {0:e}")]
    IdentityLaw(f64),

    #[error("structure functions are not constant (spread {spread:e} > {tolerance:e})")]
    NotConstant { spread: f64, tolerance: f64 },

    #[error("rounded structure constants violate the Jacobi identity")]
    RoundedJacobi,

    #[error("element lies outside the multiplication chart: {0:?}")]
    OutsideChart(Vec<f64>),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
}

pub type Result<T> = std::result::Result<T, Error>;
