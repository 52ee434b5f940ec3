use thiserror::Error;

use crate::numeric::Mode;

/// Failures of the numeric primitives.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot combine a {left} value with a {right} value")]
    MixedMode { left: Mode, right: Mode },
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("integrand is {value} at x = {x}")]
    NonFiniteIntegrand { x: f64, value: f64 },
    #[error("quadrature did not converge (last two estimates {previous} and {last})")]
    QuadratureNotConverged { previous: f64, last: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("off-diagonal entry {index} is {value}, expected a positive number")]
    NonPositiveOffDiagonal { index: usize, value: f64 },
    #[error("eigenvalue {index} did not converge")]
    EigenNotConverged { index: usize },
    #[error("{what} did not converge: {detail}")]
    NotConverged { what: &'static str, detail: String },
}

/// Errors raised by the moment-space algorithms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point lies on the boundary of the moment space: a Hankel determinant of order {index} vanishes (canonical moment p_{index} is 0 or 1)")]
    Boundary { index: usize },
    #[error("point lies outside the moment space: a Hankel determinant of order {index} is negative (c_{index} is outside its admissible range)")]
    Outside { index: usize },
    #[error("operation requires {required} mode but got {got}")]
    WrongMode { required: Mode, got: Mode },
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("optimization did not converge: {0}")]
    NotConverged(String),
    #[error("dual ascent did not converge (best value {value}, gradient norm {gradient_norm}, quadrature order {quadrature_order})")]
    DualNotConverged {
        lambda0: f64,
        lambda: Vec<f64>,
        value: f64,
        gradient_norm: f64,
        quadrature_order: usize,
    },
    #[error("density does not normalize: integral against the arcsine law is {integral}")]
    Normalization { integral: f64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("expression error: {0}")]
    Expression(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Whether the error reflects malformed input rather than a
    /// mathematically invalid request.
    pub fn is_malformed_input(&self) -> bool {
        // everything else is a domain error
        matches!(
            self,
            Error::Numeric(NumericError::Parse(_))
                | Error::InvalidInput(_)
                | Error::Expression(_)
                | Error::Config(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
