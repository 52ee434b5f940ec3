//! Geometry and asymptotics of the truncated power-moment space of
//! probability measures on `[0,1]`.

pub mod error;
pub mod moments;
pub mod numeric;
pub mod principal;
pub mod rates;
pub mod sampling;

pub use error::{Error, NumericError, Result};
