use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::scalar::{format_rational, parse_rational, rational_from_f64};
use crate::numeric::{Mode, Rational, Scalar, UnitPosition, Value};

/// Truncated power-moment sequence `(c_1, …, c_n)`; `c_0 = 1` is implicit.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> MomentVector<S> {
    pub fn new(entries: Vec<S>) -> Self {
        MomentVector { entries }
    }

    pub fn empty() -> Self {
        MomentVector { entries: Vec::new() }
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `c_k` for `0 ≤ k ≤ n`, with `c_0 = 1`.
    pub fn moment(&self, k: usize) -> S {
        if k == 0 {
            S::one()
        } else {
            self.entries[k - 1].clone()
        }
    }

    /// `(c_0, c_1, …, c_n)`.
    pub fn with_mass(&self) -> Vec<S> {
        std::iter::once(S::one())
            .chain(self.entries.iter().cloned())
            .collect()
    }

    /// First `k` moments.
    pub fn prefix(&self, k: usize) -> Self {
        MomentVector::new(self.entries[..k].to_vec())
    }

    /// The vector extended by one more moment.
    pub fn extended(&self, next: S) -> Self {
        let mut entries = self.entries.clone();
        entries.push(next);
        MomentVector::new(entries)
    }

    /// Moments of the image measure under `x ↦ 1 − x`:
    /// `E(1−X)^k = Σ_j C(k,j) (−1)^j c_j`.
    pub fn reflected(&self) -> Self {
        let n = self.len();
        let full = self.with_mass();
        let entries = (1..=n)
            .map(|k| {
                let mut binom = S::one();
                let mut acc = S::zero();
                for j in 0..=k {
                    let term = binom.clone() * full[j].clone();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                    binom = binom * S::from_i64((k - j) as i64) / S::from_i64(j as i64 + 1);
                }
                acc
            })
            .collect();
        MomentVector::new(entries)
    }

    pub fn to_float(&self) -> MomentVector<f64> {
        MomentVector::new(self.entries.iter().map(Scalar::to_float).collect())
    }

    pub fn mode(&self) -> Mode {
        S::MODE
    }
}

impl MomentVector<f64> {
    /// Exact rational image of every entry (each double is a dyadic rational).
    pub fn lift_exact(&self) -> Result<MomentVector<Rational>> {
        let entries = self
            .entries
            .iter()
            .map(|&v| rational_from_f64(v))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(MomentVector::new(entries))
    }
}

/// Canonical moments `(p_1, …, p_n)`, each strictly inside `(0,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalVector<S> {
    entries: Vec<S>,
}

impl<S: Scalar> CanonicalVector<S> {
    /// Rejects entries outside the open unit interval (exactly, in both modes).
    pub fn new(entries: Vec<S>) -> Result<Self> {
        for (i, p) in entries.iter().enumerate() {
            if !(*p > S::zero() && *p < S::one()) {
                return Err(Error::InvalidInput(format!(
                    "canonical moment p_{} = {:?} is not in (0,1)",
                    i + 1,
                    p
                )));
            }
        }
        Ok(CanonicalVector { entries })
    }

    /// All entries equal to 1/2: the canonical moments of the arcsine law.
    pub fn arcsine(n: usize) -> Self {
        CanonicalVector {
            entries: vec![S::half(); n],
        }
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn prefix(&self, k: usize) -> Self {
        CanonicalVector {
            entries: self.entries[..k].to_vec(),
        }
    }

    pub fn to_float(&self) -> CanonicalVector<f64> {
        CanonicalVector {
            entries: self.entries.iter().map(Scalar::to_float).collect(),
        }
    }

    /// Whether any entry is within the float boundary tolerance of 0 or 1.
    pub fn near_boundary(&self) -> Option<usize> {
        self.entries
            .iter()
            .position(|p| p.unit_position() != UnitPosition::Inside)
            .map(|i| i + 1)
    }
}

/// Admissible interval `[c⁻, c⁺]` for the next moment.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRange<S> {
    pub c_minus: S,
    pub c_plus: S,
    pub width: S,
}

/// JSON entry: rationals travel as `"p/q"` strings, floats as numbers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WireNumber {
    Text(String),
    Number(f64),
}

impl WireNumber {
    pub fn from_value(v: &Value) -> Self {
        match v {
            Value::Exact(r) => WireNumber::Text(format_rational(r)),
            Value::Float(x) => WireNumber::Number(*x),
        }
    }

    pub fn to_value(&self, mode: Mode) -> Result<Value> {
        match (self, mode) {
            (WireNumber::Text(s), m) => Ok(Value::parse(s, m)?),
            (WireNumber::Number(x), Mode::Float) => Ok(Value::Float(*x)),
            (WireNumber::Number(x), Mode::Exact) => {
                // a bare JSON number in exact mode is read from its decimal text
                Ok(Value::Exact(parse_rational(&x.to_string())?))
            }
        }
    }
}

/// Serialized form of moment and canonical vectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorWire {
    pub mode: Mode,
    pub entries: Vec<WireNumber>,
}

impl VectorWire {
    pub fn from_scalars<S: Scalar>(entries: &[S]) -> Self {
        VectorWire {
            mode: S::MODE,
            entries: entries
                .iter()
                .map(|v| WireNumber::from_value(&v.to_value()))
                .collect(),
        }
    }

    pub fn to_scalars<S: Scalar>(&self) -> Result<Vec<S>> {
        if self.mode != S::MODE {
            return Err(Error::WrongMode {
                required: S::MODE,
                got: self.mode,
            });
        }
        self.entries
            .iter()
            .map(|e| Ok(S::from_value(&e.to_value(self.mode)?)?))
            .collect()
    }
}

impl<S: Scalar> Serialize for MomentVector<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        VectorWire::from_scalars(&self.entries).serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for MomentVector<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = VectorWire::deserialize(deserializer)?;
        wire.to_scalars().map(MomentVector::new).map_err(D::Error::custom)
    }
}

impl<S: Scalar> Serialize for CanonicalVector<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        VectorWire::from_scalars(&self.entries).serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for CanonicalVector<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = VectorWire::deserialize(deserializer)?;
        wire.to_scalars()
            .and_then(CanonicalVector::new)
            .map_err(D::Error::custom)
    }
}

impl<S: Scalar> Serialize for MomentRange<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        #[derive(Serialize)]
        struct Wire {
            c_minus: WireNumber,
            c_plus: WireNumber,
            width: WireNumber,
        }
        Wire {
            c_minus: WireNumber::from_value(&self.c_minus.to_value()),
            c_plus: WireNumber::from_value(&self.c_plus.to_value()),
            width: WireNumber::from_value(&self.width.to_value()),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn exact_vector_json_round_trip() {
        let c = MomentVector::new(vec![q("1/2"), q("3/8")]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"mode":"exact","entries":["1/2","3/8"]}"#);
        let back: MomentVector<Rational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn float_vector_json_round_trip() {
        let c = MomentVector::new(vec![0.5, 0.1 + 0.2]);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"mode":"float","entries":[0.5,0.30000000000000004]}"#);
        let back: MomentVector<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let r: std::result::Result<MomentVector<f64>, _> =
            serde_json::from_str(r#"{"mode":"exact","entries":["1/2"]}"#);
        assert!(r.is_err());
    }

    #[test]
    fn canonical_rejects_closed_endpoints() {
        assert!(CanonicalVector::new(vec![q("1/2"), q("1")]).is_err());
        assert!(CanonicalVector::new(vec![0.0]).is_err());
        let bad: std::result::Result<CanonicalVector<Rational>, _> =
            serde_json::from_str(r#"{"mode":"exact","entries":["3/2"]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn reflection_of_arcsine_prefix_is_itself() {
        let c = MomentVector::new(vec![q("1/2"), q("3/8"), q("5/16")]);
        assert_eq!(c.reflected(), c);
        // δ_{1/4} reflects to δ_{3/4}
        let d = MomentVector::new(vec![q("1/4"), q("1/16")]);
        assert_eq!(d.reflected(), MomentVector::new(vec![q("3/4"), q("9/16")]));
    }

    #[test]
    fn lift_is_exact() {
        let c = MomentVector::new(vec![0.5, 0.375]);
        assert_eq!(
            c.lift_exact().unwrap(),
            MomentVector::new(vec![q("1/2"), q("3/8")])
        );
    }
}
