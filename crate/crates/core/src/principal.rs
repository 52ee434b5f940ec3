//! Principal representations: the finitely supported measures that match
//! `n` moments and attain the extreme value `c⁺` or `c⁻` of the next one.
//!
//! The construction appends a terminal canonical moment (1 for the upper
//! representation, 0 for the lower), forms the recurrence coefficients
//! `ζ_k = (1 − p_{k−1}) p_k`, and reads atoms and weights off the
//! eigen-decomposition of the induced Jacobi matrix
//!
//! ```text
//! a_k = ζ_{2k} + ζ_{2k+1}        (k ≥ 0, ζ_0 = 0)
//! b_k = √(ζ_{2k−1} ζ_{2k})       (k ≥ 1)
//! ```
//!
//! truncated just before the first vanishing `ζ_t`. Whether an endpoint of
//! `[0,1]` carries an atom falls out of the spectrum.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::moments::coordinates::{moments_from_canonical_raw, zeta_sequence};
use crate::moments::{moment_range, moments_to_canonical, CanonicalVector, MomentVector, WireNumber};
use crate::numeric::{symmetric_tridiagonal_eigen, Mode, Rational, Scalar};

/// Which extreme of the next-moment range the measure attains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "upper" => Ok(Side::Upper),
            "lower" => Ok(Side::Lower),
            other => Err(Error::InvalidInput(format!("unknown side `{other}`"))),
        }
    }
}

/// Moment-match tolerance for constructed float measures.
pub const MOMENT_MATCH_TOLERANCE: f64 = 1e-8;
/// Allowed drift of the total weight of a float measure.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;
/// Eigenvalues this close outside `[0,1]` are snapped onto the endpoint.
const ENDPOINT_SNAP: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<S> {
    pub x: S,
    pub w: S,
}

/// Probability measure with finitely many atoms in `[0,1]`, locations
/// strictly increasing, weights positive and summing to 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure<S> {
    atoms: Vec<Atom<S>>,
}

impl<S: Scalar> DiscreteMeasure<S> {
    pub fn new(atoms: Vec<Atom<S>>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut total = S::zero();
        for (i, a) in atoms.iter().enumerate() {
            if a.x < S::zero() || a.x > S::one() {
                return Err(Error::InvalidMeasure(format!("atom {:?} outside [0,1]", a.x)));
            }
            if a.w <= S::zero() {
                return Err(Error::InvalidMeasure(format!("non-positive weight {:?}", a.w)));
            }
            if i > 0 && a.x <= atoms[i - 1].x {
                return Err(Error::InvalidMeasure("atom locations must increase".into()));
            }
            total = total + a.w.clone();
        }
        let drift = (total.clone() - S::one()).to_float().abs();
        let allowed = match S::MODE {
            Mode::Exact => 0.0,
            Mode::Float => WEIGHT_SUM_TOLERANCE,
        };
        if drift > allowed {
            return Err(Error::InvalidMeasure(format!("weights sum to {total:?}")));
        }
        Ok(DiscreteMeasure { atoms })
    }

    pub fn dirac(x: S) -> Result<Self> {
        DiscreteMeasure::new(vec![Atom { x, w: S::one() }])
    }

    pub fn atoms(&self) -> &[Atom<S>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|a| a.x.to_float() <= x)
            .map(|a| a.w.to_float())
            .sum()
    }

    /// `sup_x |F(x) − G(x)|` against a continuous distribution function `G`.
    /// The supremum is attained at an atom, from the left or the right.
    pub fn kolmogorov_distance(&self, g: impl Fn(f64) -> f64) -> f64 {
        let mut below = 0.0;
        let mut worst: f64 = 0.0;
        for a in &self.atoms {
            let x = a.x.to_float();
            let gx = g(x);
            let above = below + a.w.to_float();
            worst = worst.max((gx - below).abs()).max((above - gx).abs());
            below = above;
        }
        worst
    }

    pub fn to_float(&self) -> DiscreteMeasure<f64> {
        DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom { x: a.x.to_float(), w: a.w.to_float() })
                .collect(),
        }
    }
}

/// `c_k = Σ w_i x_i^k` for `k = 1..n`.
pub fn measure_moments<S: Scalar>(mu: &DiscreteMeasure<S>, n: usize) -> MomentVector<S> {
    let mut powers: Vec<S> = mu.atoms.iter().map(|a| a.w.clone()).collect();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut ck = S::zero();
        for (pw, a) in powers.iter_mut().zip(&mu.atoms) {
            *pw = pw.clone() * a.x.clone();
            ck = ck + pw.clone();
        }
        out.push(ck);
    }
    MomentVector::new(out)
}

/// Recurrence data of a measure given by canonical moments that end in a
/// terminal 0 or 1.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceCoefficients {
    /// `ζ_1, ζ_2, …` up to and including the first zero.
    pub zeta: Vec<f64>,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl RecurrenceCoefficients {
    /// Builds the truncated Jacobi matrix from canonical moments `p`,
    /// the last of which must be 0 or 1.
    pub fn from_terminated_canonical(p: &[f64]) -> Result<Self> {
        let mut zeta = zeta_sequence(p);
        if !zeta.iter().any(|z| *z == 0.0) {
            // a terminal 1 makes the following ζ vanish
            zeta.push(0.0);
        }
        let t = zeta.iter().position(|z| *z == 0.0).expect("terminated") + 1;
        zeta.truncate(t);
        // z(k) = ζ_k with ζ_0 = 0 and zero from index t on
        let z = |k: usize| if k == 0 || k >= t { 0.0 } else { zeta[k - 1] };
        let size = t.div_ceil(2);
        let diag = (0..size).map(|k| z(2 * k) + z(2 * k + 1)).collect();
        let offdiag = (1..size).map(|k| (z(2 * k - 1) * z(2 * k)).sqrt()).collect();
        Ok(RecurrenceCoefficients { zeta, diag, offdiag })
    }

    /// Atoms and weights of the measure, via the tridiagonal eigenproblem.
    pub fn measure(&self) -> Result<DiscreteMeasure<f64>> {
        let spectrum = symmetric_tridiagonal_eigen(&self.diag, &self.offdiag)?;
        let mut atoms = Vec::with_capacity(spectrum.eigenvalues.len());
        for (&x, &w) in spectrum.eigenvalues.iter().zip(&spectrum.first_weights) {
            let x = if x < 0.0 && x > -ENDPOINT_SNAP {
                0.0
            } else if x > 1.0 && x < 1.0 + ENDPOINT_SNAP {
                1.0
            } else {
                x
            };
            atoms.push(Atom { x, w });
        }
        DiscreteMeasure::new(atoms).map_err(|e| Error::Construction(e.to_string()))
    }
}

/// Principal representation for canonical coordinates of an interior point.
pub fn principal_from_canonical(p: &CanonicalVector<f64>, side: Side) -> Result<DiscreteMeasure<f64>> {
    let mut ext = p.entries().to_vec();
    ext.push(match side {
        Side::Upper => 1.0,
        Side::Lower => 0.0,
    });
    let mu = RecurrenceCoefficients::from_terminated_canonical(&ext)?.measure()?;
    let target = moments_from_canonical_raw(&ext);
    verify_moments(&mu, &target)?;
    Ok(mu)
}

fn verify_moments(mu: &DiscreteMeasure<f64>, target: &[f64]) -> Result<()> {
    let got = measure_moments(mu, target.len());
    for (k, (a, b)) in got.entries().iter().zip(target).enumerate() {
        if (a - b).abs() > MOMENT_MATCH_TOLERANCE {
            return Err(Error::Construction(format!(
                "moment {} of the constructed measure is {a}, expected {b}",
                k + 1
            )));
        }
    }
    Ok(())
}

/// The unique measure with moments `c` whose next moment is `c⁺` (upper)
/// or `c⁻` (lower).
///
/// Float input is lifted to exact rationals before computing canonical
/// moments, since that map loses about `log10(1/r_n)` digits in floating
/// point.
pub fn principal_representation<S: Scalar>(
    c: &MomentVector<S>,
    side: Side,
) -> Result<DiscreteMeasure<f64>> {
    let exact: MomentVector<Rational> = match S::MODE {
        Mode::Exact => MomentVector::new(
            c.entries()
                .iter()
                .map(|v| Rational::from_value(&v.to_value()).expect("exact mode"))
                .collect(),
        ),
        Mode::Float => c.to_float().lift_exact()?,
    };
    let p = moments_to_canonical(&exact)?;
    let range = moment_range(&exact)?;
    let mu = principal_from_canonical(&p.to_float(), side)?;
    let extreme = match side {
        Side::Upper => range.c_plus,
        Side::Lower => range.c_minus,
    };
    let mut target: Vec<f64> = c.entries().iter().map(Scalar::to_float).collect();
    target.push(extreme.to_float());
    verify_moments(&mu, &target)?;
    Ok(mu)
}

/// Upper principal representation `σ_n⁺(c)`, the random measure built from a
/// sampled moment vector.
pub fn sigma_plus_of_sample<S: Scalar>(c: &MomentVector<S>) -> Result<DiscreteMeasure<f64>> {
    principal_representation(c, Side::Upper)
}

#[derive(Serialize, Deserialize)]
struct AtomWire {
    x: WireNumber,
    w: WireNumber,
}

#[derive(Serialize, Deserialize)]
struct MeasureWire {
    atoms: Vec<AtomWire>,
}

impl<S: Scalar> Serialize for DiscreteMeasure<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        MeasureWire {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomWire {
                    x: WireNumber::from_value(&a.x.to_value()),
                    w: WireNumber::from_value(&a.w.to_value()),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for DiscreteMeasure<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = MeasureWire::deserialize(deserializer)?;
        let convert = |n: &WireNumber| -> Result<S> { Ok(S::from_value(&n.to_value(S::MODE)?)?) };
        let atoms = wire
            .atoms
            .iter()
            .map(|a| Ok(Atom { x: convert(&a.x)?, w: convert(&a.w)? }))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        DiscreteMeasure::new(atoms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn assert_atoms(mu: &DiscreteMeasure<f64>, expected: &[(f64, f64)], tol: f64) {
        assert_eq!(mu.len(), expected.len(), "{mu:?}");
        for (a, &(x, w)) in mu.atoms().iter().zip(expected) {
            assert!((a.x - x).abs() < tol && (a.w - w).abs() < tol, "{mu:?}");
        }
    }

    #[test]
    fn moments_of_discrete_measures() {
        let d = DiscreteMeasure::dirac(q("1/2")).unwrap();
        assert_eq!(measure_moments(&d, 2).into_entries(), vec![q("1/2"), q("1/4")]);
        let b = DiscreteMeasure::new(vec![
            Atom { x: q("0"), w: q("1/2") },
            Atom { x: q("1"), w: q("1/2") },
        ])
        .unwrap();
        assert_eq!(measure_moments(&b, 3).into_entries(), vec![q("1/2"); 3]);
        let m = DiscreteMeasure::new(vec![
            Atom { x: q("1/4"), w: q("2/3") },
            Atom { x: q("1"), w: q("1/3") },
        ])
        .unwrap();
        assert_eq!(
            measure_moments(&m, 3).into_entries(),
            vec![q("1/2"), q("3/8"), q("11/32")]
        );
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure::new(vec![Atom { x: q("1/2"), w: q("1/2") }]).is_err());
        assert!(DiscreteMeasure::new(vec![Atom { x: 1.5, w: 1.0 }]).is_err());
        assert!(DiscreteMeasure::new(vec![Atom { x: 0.6, w: 0.5 }, Atom { x: 0.4, w: 0.5 }]).is_err());
        assert!(DiscreteMeasure::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn first_order_representations() {
        let c = MomentVector::new(vec![q("1/2")]);
        assert_atoms(&principal_representation(&c, Side::Upper).unwrap(), &[(0.0, 0.5), (1.0, 0.5)], 1e-14);
        assert_atoms(&principal_representation(&c, Side::Lower).unwrap(), &[(0.5, 1.0)], 1e-14);
    }

    #[test]
    fn two_moment_upper_representation() {
        let c = MomentVector::new(vec![q("1/2"), q("3/8")]);
        let mu = sigma_plus_of_sample(&c).unwrap();
        assert_atoms(&mu, &[(0.25, 2.0 / 3.0), (1.0, 1.0 / 3.0)], 1e-12);
        let lower = principal_representation(&c, Side::Lower).unwrap();
        let m = measure_moments(&lower, 3);
        assert!((m.entries()[2] - 9.0 / 32.0).abs() < 1e-12);
    }

    #[test]
    fn float_input_is_accepted() {
        let c = MomentVector::new(vec![0.5, 0.375]);
        let mu = principal_representation(&c, Side::Upper).unwrap();
        assert_atoms(&mu, &[(0.25, 2.0 / 3.0), (1.0, 1.0 / 3.0)], 1e-12);
    }

    #[test]
    fn non_interior_is_rejected() {
        let c = MomentVector::new(vec![q("1/2"), q("1/2")]);
        assert_eq!(
            principal_representation(&c, Side::Upper),
            Err(Error::Boundary { index: 2 })
        );
    }

    #[test]
    fn recurrence_sizes() {
        // terminal 0 after n = 3 cuts at ζ_4: a 2×2 matrix; terminal 1 cuts at ζ_5: 3×3
        let lower = RecurrenceCoefficients::from_terminated_canonical(&[0.5, 0.5, 0.5, 0.0]).unwrap();
        assert_eq!(lower.diag.len(), 2);
        let upper = RecurrenceCoefficients::from_terminated_canonical(&[0.5, 0.5, 0.5, 1.0]).unwrap();
        assert_eq!(upper.diag.len(), 3);
        assert!(upper.offdiag.iter().all(|b| *b > 0.0));
    }

    #[test]
    fn extremes_differ_by_the_width() {
        let p = CanonicalVector::new(vec![0.3, 0.8, 0.45, 0.6, 0.25]).unwrap();
        let up = principal_from_canonical(&p, Side::Upper).unwrap();
        let lo = principal_from_canonical(&p, Side::Lower).unwrap();
        let diff = measure_moments(&up, 6).entries()[5] - measure_moments(&lo, 6).entries()[5];
        let width: f64 = p.entries().iter().map(|x| x * (1.0 - x)).product();
        assert!((diff - width).abs() < 1e-12);
    }

    #[test]
    fn kolmogorov_distance_of_two_point_measure() {
        let mu = DiscreteMeasure::new(vec![Atom { x: 0.0, w: 0.5 }, Atom { x: 1.0, w: 0.5 }]).unwrap();
        assert!((mu.kolmogorov_distance(crate::numeric::special::arcsine_cdf) - 0.5).abs() < 1e-15);
        assert_eq!(mu.cdf(0.3), 0.5);
    }

    #[test]
    fn json_shape() {
        let mu = DiscreteMeasure::new(vec![Atom { x: 0.25, w: 0.75 }, Atom { x: 1.0, w: 0.25 }]).unwrap();
        let json = serde_json::to_string(&mu).unwrap();
        assert_eq!(json, r#"{"atoms":[{"x":0.25,"w":0.75},{"x":1.0,"w":0.25}]}"#);
        let back: DiscreteMeasure<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, mu);
    }
}
