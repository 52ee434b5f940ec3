//! Moment ranges, canonical coordinates and membership classification.
//!
//! Two independent routes compute the range `[c⁻, c⁺]` of the next moment:
//!
//! * the Hankel route solves `H̲_{k+1} = 0` and `H̄_{k+1} = 0`, both affine
//!   in `c_{k+1}`; used in exact mode,
//! * the canonical route appends a terminal canonical moment 0 or 1 and
//!   maps back to moments; used in float mode, where Hankel determinants
//!   underflow long before the canonical moments lose accuracy.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Mode, Scalar, UnitPosition};

use super::hankel::{hankel_of_full, HankelPair};
use super::vector::{CanonicalVector, MomentRange, MomentVector};

/// Absolute tolerance for matching the moments that follow a float-mode
/// boundary point against their determined continuation.
pub const FLOAT_CONTINUATION_TOLERANCE: f64 = 1e-9;

/// Position of a moment vector relative to the moment space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum Classification {
    Interior,
    /// `p_index ∈ {0,1}` with all earlier canonical moments interior, and the
    /// later moments equal to the ones the boundary point determines.
    Boundary { index: usize },
    /// `c_index` is the first moment that no probability measure can have.
    Outside { index: usize },
}

impl Classification {
    pub fn is_interior(&self) -> bool {
        matches!(self, Classification::Interior)
    }

    fn into_result(self) -> Result<()> {
        match self {
            Classification::Interior => Ok(()),
            Classification::Boundary { index } => Err(Error::Boundary { index }),
            Classification::Outside { index } => Err(Error::Outside { index }),
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Interior => f.write_str("interior"),
            Classification::Boundary { index } => write!(f, "boundary (p_{index} is 0 or 1)"),
            Classification::Outside { index } => write!(f, "outside (c_{index} out of range)"),
        }
    }
}

/// Moments of the measure with canonical moments `p` via the Skibinsky
/// triangle. Entries may be 0 or 1; everything after the first vanishing
/// `ζ_t` is irrelevant and treated as zero.
pub(crate) fn moments_from_canonical_raw<S: Scalar>(p: &[S]) -> Vec<S> {
    let zeta = zeta_sequence(p);
    let n = p.len();
    // s[i][j] for 0 ≤ i ≤ j ≤ n, zero below the diagonal
    let mut s = vec![vec![S::zero(); n + 1]; n + 1];
    for entry in s[0].iter_mut() {
        *entry = S::one();
    }
    for j in 1..=n {
        for i in 1..=j {
            s[i][j] = s[i][j - 1].clone() + zeta[j - i].clone() * s[i - 1][j].clone();
        }
    }
    (1..=n).map(|j| s[j][j].clone()).collect()
}

/// `ζ_1 = p_1`, `ζ_k = (1 − p_{k−1}) p_k`, cut off after the first zero.
pub(crate) fn zeta_sequence<S: Scalar>(p: &[S]) -> Vec<S> {
    let mut zeta = Vec::with_capacity(p.len());
    let mut q_prev = S::one();
    let mut terminated = false;
    for pk in p {
        let z = if terminated {
            S::zero()
        } else {
            q_prev.clone() * pk.clone()
        };
        if z.is_zero() {
            terminated = true;
        }
        zeta.push(z);
        q_prev = S::one() - pk.clone();
    }
    zeta
}

/// Inverse of [`moments_to_canonical`].
pub fn canonical_to_moments<S: Scalar>(p: &CanonicalVector<S>) -> MomentVector<S> {
    MomentVector::new(moments_from_canonical_raw(p.entries()))
}

/// `Π p_i (1 − p_i)`, the width of the next-moment range.
pub fn range_width_product<S: Scalar>(p: &CanonicalVector<S>) -> S {
    width_product(p.entries())
}

fn width_product<S: Scalar>(p: &[S]) -> S {
    p.iter()
        .fold(S::one(), |acc, pi| acc * pi.clone() * (S::one() - pi.clone()))
}

/// Range of the next moment given the canonical moments of the prefix.
pub fn range_from_canonical<S: Scalar>(p: &CanonicalVector<S>) -> MomentRange<S> {
    range_from_canonical_slice(p.entries())
}

fn range_from_canonical_slice<S: Scalar>(p: &[S]) -> MomentRange<S> {
    let mut ext = p.to_vec();
    ext.push(S::zero());
    let c_minus = moments_from_canonical_raw(&ext).pop().expect("nonempty");
    *ext.last_mut().expect("nonempty") = S::one();
    let c_plus = moments_from_canonical_raw(&ext).pop().expect("nonempty");
    MomentRange {
        c_minus,
        c_plus,
        width: width_product(p),
    }
}

/// Walks the orders `1, 2, …` of a moment vector, producing at each order
/// the range of `c_m` given `c_1..c_{m−1}` and then the actual determinants.
///
/// `H̲_m` and `H̄_m` are affine in `c_m` with slopes `H̲_{m−2}` and
/// `−H̄_{m−2}` (the cofactor of the corner entry), so two determinants per
/// order suffice.
struct HankelScan<S> {
    full: Vec<S>,
    older: HankelPair<S>,
    newer: HankelPair<S>,
    order: usize,
}

impl<S: Scalar> HankelScan<S> {
    fn new(c: &MomentVector<S>) -> Self {
        HankelScan {
            full: c.with_mass(),
            // order −1 by convention
            older: HankelPair { index: 0, lower: S::one(), upper: S::one() },
            newer: hankel_of_full(&[S::one()], 0),
            order: 0,
        }
    }

    /// Range of the moment of order `self.order + 1` given the earlier ones,
    /// evaluated on `full[..=order]` extended by `next`.
    fn range_of_next(&self, next_slot: &mut Vec<S>) -> MomentRange<S> {
        let m = self.order + 1;
        next_slot.clear();
        next_slot.extend_from_slice(&self.full[..m]);
        next_slot.push(S::zero());
        let at_zero = hankel_of_full(next_slot, m);
        let a = -at_zero.lower / self.older.lower.clone();
        let b = at_zero.upper / self.older.upper.clone();
        let (c_minus, c_plus) = if a <= b { (a, b) } else { (b, a) };
        let width = c_plus.clone() - c_minus.clone();
        MomentRange { c_minus, c_plus, width }
    }

    /// Advances past `c_{order+1}`, returning its range and canonical moment.
    fn step(&mut self, buf: &mut Vec<S>) -> (MomentRange<S>, S) {
        let range = self.range_of_next(buf);
        let m = self.order + 1;
        let cm = self.full[m].clone();
        let p = (cm.clone() - range.c_minus.clone()) / range.width.clone();
        let at_zero = hankel_of_full(buf, m);
        let actual = HankelPair {
            index: m,
            lower: at_zero.lower + self.older.lower.clone() * cm.clone(),
            upper: at_zero.upper - self.older.upper.clone() * cm,
        };
        self.older = std::mem::replace(&mut self.newer, actual);
        self.order = m;
        (range, p)
    }
}

/// Classifies `c` as interior, boundary or outside of the moment space.
pub fn classify<S: Scalar>(c: &MomentVector<S>) -> Classification {
    let mut p = Vec::with_capacity(c.len());
    let mut scan = (S::MODE == Mode::Exact).then(|| HankelScan::new(c));
    let mut buf = Vec::new();
    for i in 1..=c.len() {
        let pi = match scan.as_mut() {
            Some(scan) => scan.step(&mut buf).1,
            None => {
                let range = range_from_canonical_slice(&p);
                (c.moment(i) - range.c_minus) / range.width
            }
        };
        match pi.unit_position() {
            UnitPosition::Inside => p.push(pi),
            UnitPosition::Below | UnitPosition::Above => {
                return Classification::Outside { index: i }
            }
            UnitPosition::AtZero | UnitPosition::AtOne => {
                let terminal = if pi.unit_position() == UnitPosition::AtZero {
                    S::zero()
                } else {
                    S::one()
                };
                return boundary_continuation(c, p, terminal, i);
            }
        }
    }
    Classification::Interior
}

/// A boundary point determines all later moments; anything else is outside.
fn boundary_continuation<S: Scalar>(
    c: &MomentVector<S>,
    mut p: Vec<S>,
    terminal: S,
    index: usize,
) -> Classification {
    p.push(terminal);
    p.resize(c.len(), S::half());
    let determined = moments_from_canonical_raw(&p);
    let tol = S::from_rational(&crate::numeric::rational_from_f64(
        if S::MODE == Mode::Exact { 0.0 } else { FLOAT_CONTINUATION_TOLERANCE },
    ).expect("finite"));
    for j in index + 1..=c.len() {
        let diff = c.moment(j) - determined[j - 1].clone();
        if diff > tol || diff < -tol.clone() {
            return Classification::Outside { index: j };
        }
    }
    Classification::Boundary { index }
}

/// Canonical moments `p_i = (c_i − c⁻_i)/(c⁺_i − c⁻_i)` of an interior point.
pub fn moments_to_canonical<S: Scalar>(c: &MomentVector<S>) -> Result<CanonicalVector<S>> {
    let mut p = Vec::with_capacity(c.len());
    let mut scan = (S::MODE == Mode::Exact).then(|| HankelScan::new(c));
    let mut buf = Vec::new();
    for i in 1..=c.len() {
        let pi = match scan.as_mut() {
            Some(scan) => scan.step(&mut buf).1,
            None => {
                let range = range_from_canonical_slice(&p);
                (c.moment(i) - range.c_minus) / range.width
            }
        };
        if pi.unit_position() != UnitPosition::Inside {
            classify(c).into_result()?;
            unreachable!("a non-interior coordinate implies a non-interior point");
        }
        p.push(pi);
    }
    CanonicalVector::new(p)
}

/// Range of the next moment by the Hankel route.
pub fn moment_range_hankel<S: Scalar>(c: &MomentVector<S>) -> Result<MomentRange<S>> {
    let mut scan = HankelScan::new(c);
    let mut buf = Vec::new();
    for _ in 1..=c.len() {
        let (_, p) = scan.step(&mut buf);
        if p.unit_position() != UnitPosition::Inside {
            classify(c).into_result()?;
        }
    }
    // c_{k+1} is not part of the input; only its range is needed
    let mut extended = scan.full.clone();
    extended.push(S::zero());
    scan.full = extended;
    Ok(scan.range_of_next(&mut buf))
}

/// Range of the next moment by the canonical route.
pub fn moment_range_canonical<S: Scalar>(c: &MomentVector<S>) -> Result<MomentRange<S>> {
    let p = moments_to_canonical(c)?;
    Ok(range_from_canonical(&p))
}

/// Admissible interval `[c⁻, c⁺]` for `c_{k+1}` given an interior `c^{(k)}`:
/// the Hankel route in exact mode, the canonical route in float mode.
pub fn moment_range<S: Scalar>(c: &MomentVector<S>) -> Result<MomentRange<S>> {
    match S::MODE {
        Mode::Exact => moment_range_hankel(c),
        Mode::Float => moment_range_canonical(c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::hankel::{hankel, range_width_hankel};
    use crate::numeric::{parse_rational, Rational};

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn mv(v: &[&str]) -> MomentVector<Rational> {
        MomentVector::new(v.iter().map(|s| q(s)).collect())
    }

    fn cv(v: &[&str]) -> CanonicalVector<Rational> {
        CanonicalVector::new(v.iter().map(|s| q(s)).collect()).unwrap()
    }

    #[test]
    fn triangle_second_moment() {
        // c_2 = p1 (p1 + q1 p2)
        let c = canonical_to_moments(&cv(&["1/3", "1/4"]));
        assert_eq!(c.entries()[1], q("1/3") * (q("1/3") + q("2/3") * q("1/4")));
    }

    #[test]
    fn arcsine_canonical_moments() {
        let c = mv(&["1/2", "3/8", "5/16"]);
        assert_eq!(moments_to_canonical(&c).unwrap(), cv(&["1/2", "1/2", "1/2"]));
        assert_eq!(canonical_to_moments(&cv(&["1/2", "1/2", "1/2"])), c);
    }

    #[test]
    fn ranges_by_both_routes() {
        let cases: [(&[&str], &str, &str); 3] = [
            (&[], "0", "1"),
            (&["1/2"], "1/4", "1/2"),
            (&["1/2", "3/8"], "9/32", "11/32"),
        ];
        for (c, lo, hi) in cases {
            let c = mv(c);
            for r in [moment_range_hankel(&c).unwrap(), moment_range_canonical(&c).unwrap()] {
                assert_eq!(r.c_minus, q(lo));
                assert_eq!(r.c_plus, q(hi));
                assert_eq!(r.width, q(hi) - q(lo));
            }
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&mv(&["1/2", "3/8"])), Classification::Interior);
        assert_eq!(classify(&mv(&["1/2", "1/2"])), Classification::Boundary { index: 2 });
        assert_eq!(classify(&mv(&["1/2", "3/5"])), Classification::Outside { index: 2 });
        assert_eq!(classify(&MomentVector::new(vec![0.5, 0.6])), Classification::Outside { index: 2 });
        assert_eq!(classify(&MomentVector::new(vec![0.5, 0.5])), Classification::Boundary { index: 2 });
        assert_eq!(classify(&MomentVector::<Rational>::empty()), Classification::Interior);
    }

    #[test]
    fn boundary_determines_the_rest() {
        // ½δ0 + ½δ1 has every moment 1/2
        assert_eq!(classify(&mv(&["1/2", "1/2", "1/2", "1/2"])), Classification::Boundary { index: 2 });
        assert_eq!(classify(&mv(&["1/2", "1/2", "1/2", "2/5"])), Classification::Outside { index: 4 });
        // δ_{1/2}: p2 = 0
        assert_eq!(classify(&mv(&["1/2", "1/4", "1/8"])), Classification::Boundary { index: 2 });
        // the triangle with later junk still returns the determined moments
        let m = moments_from_canonical_raw(&[q("1/2"), q("1"), q("1/3"), q("3/4")]);
        assert_eq!(m, vec![q("1/2"); 4]);
        let m = moments_from_canonical_raw(&[q("1/2"), q("0"), q("1/3"), q("3/4")]);
        assert_eq!(m, vec![q("1/2"), q("1/4"), q("1/8"), q("1/16")]);
    }

    #[test]
    fn classification_agrees_with_determinant_signs() {
        let pts = [
            mv(&["1/3", "1/6", "1/10"]),
            mv(&["1/3", "1/6", "1/5"]),
            mv(&["2/3", "1/2", "2/5", "1/3"]),
            mv(&["1/2", "3/8", "5/16", "1/3"]),
        ];
        for c in pts {
            let signs: Vec<i32> = (1..=c.len())
                .map(|m| {
                    let h = hankel(&c, m).unwrap();
                    h.lower.tolerant_signum().min(h.upper.tolerant_signum())
                })
                .collect();
            let expected = match signs.iter().position(|&s| s <= 0) {
                None => Classification::Interior,
                Some(i) if signs[i] < 0 => Classification::Outside { index: i + 1 },
                Some(i) => Classification::Boundary { index: i + 1 },
            };
            assert_eq!(classify(&c), expected, "{c:?}");
        }
    }

    #[test]
    fn boundary_errors_name_the_index() {
        assert_eq!(
            moments_to_canonical(&mv(&["1/2", "1/2"])),
            Err(Error::Boundary { index: 2 })
        );
        assert_eq!(
            moment_range(&mv(&["1/2", "3/5"])),
            Err(Error::Outside { index: 2 })
        );
    }

    #[test]
    fn widths_agree() {
        let p = cv(&["1/3", "3/7", "5/6", "1/9", "1/2"]);
        let c = canonical_to_moments(&p);
        let w = range_width_product(&p);
        assert_eq!(moment_range_hankel(&c).unwrap().width, w);
        assert_eq!(range_width_hankel(&c).unwrap(), w);
        assert_eq!(c.reflected().len(), 5);
        assert_eq!(moment_range(&c.reflected()).unwrap().width, w);
        assert_eq!(range_width_product(&cv(&["1/2", "1/2"])), q("1/16"));
    }

    #[test]
    fn float_round_trip() {
        // p_i is recovered from c_i − c⁻_i, a difference of size r_i, so its
        // error scales like ε / r_i
        let p = CanonicalVector::new(vec![0.3, 0.71, 0.45, 0.2, 0.9, 0.5, 0.33, 0.6, 0.48, 0.52, 0.1, 0.77]).unwrap();
        let c = canonical_to_moments(&p);
        let back = moments_to_canonical(&c).unwrap();
        let mut r = 1.0;
        for (a, b) in back.entries().iter().zip(p.entries()) {
            assert!((a - b).abs() * r < 1e-13, "{a} vs {b}");
            r *= b * (1.0 - b);
        }
        let arcsine = canonical_to_moments(&CanonicalVector::<f64>::arcsine(12));
        let back = moments_to_canonical(&arcsine).unwrap();
        assert!(back.entries().iter().all(|x| (x - 0.5).abs() < 1e-10));
    }
}
