//! Rate functions of the uniform moment vectors and the variational objects
//! around them.

pub mod dual;
pub mod expr;
pub mod ldp;
pub mod mdp;
pub mod measure;
pub mod range;
pub mod tilt;

pub use dual::{dual_hk_maximize, dual_hk_maximize_with, DualOptions, DualSolution};
pub use expr::{Expr, RealFn};
pub use ldp::{rate_i1_beta, rate_ik, rate_ik_canonical};
pub use mdp::{md_coefficients, rate_jk, MdCoefficients};
pub use measure::{reversed_kullback, MeasureSpec, Polynomial};
pub use range::{polynomial_case_range, range_size, range_size_checked, PolynomialCaseRange, RangeSizeCheck};
pub use tilt::{tilt_limit, TiltCase, TiltSolution};
