//! Large-deviation rates of uniform moment vectors.

use crate::moments::{moments_to_canonical, CanonicalVector, MomentVector};
use crate::numeric::Scalar;

/// `Î(x) = −ln(x − x²) − ln 4`, the rate of a single canonical moment;
/// `+∞` off the open unit interval.
pub fn rate_i1_beta(x: f64) -> f64 {
    if x > 0.0 && x < 1.0 {
        -(x * (1.0 - x)).ln() - 4f64.ln()
    } else {
        f64::INFINITY
    }
}

/// `Σ_i −ln(4 p_i (1 − p_i))`.
pub fn rate_ik_canonical<S: Scalar>(p: &CanonicalVector<S>) -> f64 {
    let four = S::from_i64(4);
    p.entries()
        .iter()
        .map(|pi| -(four.clone() * pi.clone() * (S::one() - pi.clone())).ln_float())
        .sum()
}

/// `I_k(c) = −ln(c⁺ − c⁻) − k ln 4` on the interior of the moment space,
/// evaluated in canonical coordinates; `+∞` elsewhere.
pub fn rate_ik<S: Scalar>(c: &MomentVector<S>) -> f64 {
    match moments_to_canonical(c) {
        Ok(p) => rate_ik_canonical(&p),
        Err(_) => f64::INFINITY,
    }
}
