//! Hankel determinants of a moment sequence.
//!
//! With `c_0 = 1`:
//!
//! * `H̲_{2m} = det[c_{i+j}]_{i,j=0..m}`,
//!   `H̄_{2m} = det[c_{i+j+1} − c_{i+j+2}]_{i,j=0..m−1}`,
//! * `H̲_{2m+1} = det[c_{i+j+1}]_{i,j=0..m}`,
//!   `H̄_{2m+1} = det[c_{i+j} − c_{i+j+1}]_{i,j=0..m}`,
//!
//! and `H̲_0 = H̄_0 = 1`. A vector is interior to the moment space exactly
//! when all of them are strictly positive.

use crate::error::{Error, Result};
use crate::numeric::Scalar;

use super::vector::MomentVector;

/// The lower and upper Hankel determinants of one order.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelPair<S> {
    pub index: usize,
    pub lower: S,
    pub upper: S,
}

/// Matrices whose determinants are `H̲_m` and `H̄_m`, built from
/// `full = (c_0, …, c_m, …)`.
pub(crate) fn hankel_matrices<S: Scalar>(full: &[S], m: usize) -> (Vec<Vec<S>>, Vec<Vec<S>>) {
    let half = m / 2;
    let build = |size: usize, entry: &dyn Fn(usize) -> S| -> Vec<Vec<S>> {
        (0..size)
            .map(|i| (0..size).map(|j| entry(i + j)).collect())
            .collect()
    };
    if m % 2 == 0 {
        let lower = build(half + 1, &|s| full[s].clone());
        let upper = build(half, &|s| full[s + 1].clone() - full[s + 2].clone());
        (lower, upper)
    } else {
        let lower = build(half + 1, &|s| full[s + 1].clone());
        let upper = build(half + 1, &|s| full[s].clone() - full[s + 1].clone());
        (lower, upper)
    }
}

pub(crate) fn hankel_of_full<S: Scalar>(full: &[S], m: usize) -> HankelPair<S> {
    if m == 0 {
        return HankelPair {
            index: 0,
            lower: S::one(),
            upper: S::one(),
        };
    }
    let (lower, upper) = hankel_matrices(full, m);
    HankelPair {
        index: m,
        lower: S::determinant(lower),
        upper: S::determinant(upper),
    }
}

/// `(H̲_m, H̄_m)` of the moment vector; requires `m ≤ n`.
pub fn hankel<S: Scalar>(c: &MomentVector<S>, m: usize) -> Result<HankelPair<S>> {
    if m > c.len() {
        return Err(Error::InvalidInput(format!(
            "Hankel determinant of order {m} needs {m} moments, only {} given",
            c.len()
        )));
    }
    Ok(hankel_of_full(&c.with_mass(), m))
}

/// Width `r_{n+1} = H̲_n H̄_n / (H̲_{n−1} H̄_{n−1})` of the next-moment range.
pub fn range_width_hankel<S: Scalar>(c: &MomentVector<S>) -> Result<S> {
    let n = c.len();
    if n == 0 {
        return Ok(S::one());
    }
    let full = c.with_mass();
    let mut previous = hankel_of_full(&full, 0);
    for m in 1..=n {
        let current = hankel_of_full(&full, m);
        if current.lower.tolerant_signum() <= 0 || current.upper.tolerant_signum() <= 0 {
            return Err(hankel_failure(&current));
        }
        if m == n {
            return Ok(current.lower * current.upper / (previous.lower * previous.upper));
        }
        previous = current;
    }
    unreachable!("loop returns at m = n")
}

/// Error describing the first non-positive determinant of an order.
pub(crate) fn hankel_failure<S: Scalar>(pair: &HankelPair<S>) -> Error {
    let sign = pair.lower.tolerant_signum().min(pair.upper.tolerant_signum());
    if sign < 0 {
        Error::Outside { index: pair.index }
    } else {
        Error::Boundary { index: pair.index }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn mv(v: &[&str]) -> MomentVector<Rational> {
        MomentVector::new(v.iter().map(|s| q(s)).collect())
    }

    #[test]
    fn small_orders() {
        let c = mv(&["1/2", "3/8"]);
        assert_eq!(hankel(&c, 0).unwrap(), HankelPair { index: 0, lower: q("1"), upper: q("1") });
        let h1 = hankel(&c, 1).unwrap();
        assert_eq!((h1.lower, h1.upper), (q("1/2"), q("1/2")));
        let h2 = hankel(&c, 2).unwrap();
        assert_eq!((h2.lower, h2.upper), (q("1/8"), q("1/8")));
        assert!(hankel(&c, 3).is_err());
    }

    #[test]
    fn third_order_by_hand() {
        // H̲_3 = c1 c3 − c2², H̄_3 = (1−c1)(c2−c3) − (c1−c2)²
        let c = mv(&["1/2", "3/8", "5/16"]);
        let h = hankel(&c, 3).unwrap();
        assert_eq!(h.lower, q("1/2") * q("5/16") - q("3/8") * q("3/8"));
        assert_eq!(h.upper, q("1/2") * (q("3/8") - q("5/16")) - (q("1/8")) * q("1/8"));
    }

    #[test]
    fn width_by_hankel() {
        assert_eq!(range_width_hankel(&mv(&["1/3"])).unwrap(), q("2/9"));
        assert_eq!(range_width_hankel(&mv(&["1/2", "3/8"])).unwrap(), q("1/16"));
        assert!(matches!(
            range_width_hankel(&mv(&["1/2", "1/2"])),
            Err(Error::Boundary { index: 2 })
        ));
        assert!(matches!(
            range_width_hankel(&mv(&["1/2", "3/5"])),
            Err(Error::Outside { index: 2 })
        ));
    }
}
