//! Exact and floating-point primitives shared by every other module.

pub mod eigen;
pub mod linalg;
pub mod quadrature;
pub mod scalar;
pub mod special;

pub use eigen::{symmetric_tridiagonal_eigen, TridiagonalSpectrum};
pub use quadrature::{integrate_nu, integrate_nu_pair, integrate_nu_split, nu_quadrature, QuadratureRule};
pub use scalar::{
    format_rational, parse_rational, rational_from_f64, rational_to_f64, Mode, Rational, Scalar,
    UnitPosition, Value, FLOAT_BOUNDARY_TOLERANCE,
};
