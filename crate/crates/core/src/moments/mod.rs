//! Coordinates of the moment space: Hankel determinants, next-moment
//! ranges, canonical moments and membership classification.

pub mod coordinates;
pub mod hankel;
pub mod vector;

pub use coordinates::{
    canonical_to_moments, classify, moment_range, moment_range_canonical, moment_range_hankel,
    moments_to_canonical, range_from_canonical, range_width_product, Classification,
};
pub use hankel::{hankel, range_width_hankel, HankelPair};
pub use vector::{CanonicalVector, MomentRange, MomentVector, VectorWire, WireNumber};
