//! Scalar arithmetic policies.
//!
//! Every algorithm in the crate is generic over [`Scalar`], which has two
//! implementations: [`Rational`] (arbitrary precision, exact) and `f64`.
//! The two never mix inside a computation. At the text/JSON boundary the
//! dynamically-typed [`Value`] carries the mode alongside the number and
//! rejects mixed-mode arithmetic.

use std::fmt::{self, Debug};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::linalg;
use crate::error::NumericError;

/// Exact rational numbers, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Mode {
    type Err = NumericError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(NumericError::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Where a value sits relative to the closed unit interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitPosition {
    Below,
    AtZero,
    Inside,
    AtOne,
    Above,
}

/// A field the moment algorithms can run over.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    fn to_float(&self) -> f64;

    /// Natural logarithm as a double; `-∞` for nonpositive arguments.
    fn ln_float(&self) -> f64;

    fn to_value(&self) -> Value;

    /// Unwraps a [`Value`] of the matching mode.
    fn from_value(v: &Value) -> Result<Self, NumericError>;

    /// Determinant of a square matrix given row by row.
    fn determinant(rows: Vec<Vec<Self>>) -> Self;

    /// Distance from 0 or 1 below which a canonical moment counts as a
    /// boundary value. Zero in exact mode.
    fn boundary_tolerance() -> Self;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }

    fn unit_position(&self) -> UnitPosition {
        let tol = Self::boundary_tolerance();
        let one = Self::one();
        let upper = one.clone() - tol.clone();
        if *self < -tol.clone() {
            UnitPosition::Below
        } else if *self <= tol {
            UnitPosition::AtZero
        } else if *self < upper {
            UnitPosition::Inside
        } else if *self <= one + tol {
            UnitPosition::AtOne
        } else {
            UnitPosition::Above
        }
    }

    /// Strict sign test honouring the boundary tolerance: `-1`, `0` or `1`.
    fn tolerant_signum(&self) -> i32 {
        let tol = Self::boundary_tolerance();
        if *self > tol {
            1
        } else if *self < -tol {
            -1
        } else {
            0
        }
    }
}

/// Float-mode boundary tolerance for canonical moments.
pub const FLOAT_BOUNDARY_TOLERANCE: f64 = 1e-12;

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn to_float(&self) -> f64 {
        *self
    }

    fn ln_float(&self) -> f64 {
        if *self > 0.0 {
            self.ln()
        } else {
            f64::NEG_INFINITY
        }
    }

    fn to_value(&self) -> Value {
        Value::Float(*self)
    }

    fn from_value(v: &Value) -> Result<Self, NumericError> {
        match v {
            Value::Float(x) => Ok(*x),
            other => Err(NumericError::MixedMode {
                left: Mode::Float,
                right: other.mode(),
            }),
        }
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        linalg::det_partial_pivot(rows)
    }

    fn boundary_tolerance() -> Self {
        FLOAT_BOUNDARY_TOLERANCE
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_float(&self) -> f64 {
        rational_to_f64(self)
    }

    fn ln_float(&self) -> f64 {
        rational_ln(self)
    }

    fn to_value(&self) -> Value {
        Value::Exact(self.clone())
    }

    fn from_value(v: &Value) -> Result<Self, NumericError> {
        match v {
            Value::Exact(r) => Ok(r.clone()),
            other => Err(NumericError::MixedMode {
                left: Mode::Exact,
                right: other.mode(),
            }),
        }
    }

    fn determinant(rows: Vec<Vec<Self>>) -> Self {
        linalg::det_rational_bareiss(rows)
    }

    fn boundary_tolerance() -> Self {
        Rational::zero()
    }
}

/// Nearest-double conversion that survives numerators and denominators far
/// outside the `f64` exponent range (Hankel determinants shrink like `4^{-n^2}`).
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    // Shift both sides into range and reapply the binary exponent.
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    let scaled = if shift >= 0 {
        Rational::new(num.clone(), den.clone() << (shift as usize))
    } else {
        Rational::new(num.clone() << ((-shift) as usize), den.clone())
    };
    let mantissa = ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN);
    let exp = shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    libm::ldexp(mantissa, exp)
}

/// Natural logarithm of a positive rational without overflowing through `f64`.
pub fn rational_ln(r: &Rational) -> f64 {
    if !r.is_positive() {
        return f64::NEG_INFINITY;
    }
    let v = rational_to_f64(r);
    if v.is_normal() {
        // r − 1 is exact, so values near 1 keep full relative accuracy
        if (0.5..2.0).contains(&v) {
            return rational_to_f64(&(r - Rational::one())).ln_1p();
        }
        return v.ln();
    }
    let num = r.numer();
    let den = r.denom();
    big_ln(num) - big_ln(den)
}

fn big_ln(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return v.to_f64().map(f64::ln).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (v >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.6` or `-1.25e-3`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(NumericError::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim())
            .map_err(|_| NumericError::Parse(format!("bad numerator in `{s}`")))?;
        let q = BigInt::from_str(q.trim())
            .map_err(|_| NumericError::Parse(format!("bad denominator in `{s}`")))?;
        if q.is_zero() {
            return Err(NumericError::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Rational, NumericError> {
    let bad = || NumericError::Parse(format!("not a number: `{s}`"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Formats as `p/q`, or as a bare integer when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact image of a finite double.
pub fn rational_from_f64(v: f64) -> Result<Rational, NumericError> {
    Rational::from_f64(v).ok_or(NumericError::NonFinite(v))
}

/// Mode-tagged number used at the I/O boundary.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn mode(&self) -> Mode {
        match self {
            Value::Exact(_) => Mode::Exact,
            Value::Float(_) => Mode::Float,
        }
    }

    /// Parses a literal in the given mode. Decimal input in exact mode is
    /// read exactly (`0.6` becomes `3/5`).
    pub fn parse(s: &str, mode: Mode) -> Result<Value, NumericError> {
        match mode {
            Mode::Exact => parse_rational(s).map(Value::Exact),
            Mode::Float => {
                if s.contains('/') {
                    parse_rational(s).map(|r| Value::Float(rational_to_f64(&r)))
                } else {
                    s.trim()
                        .parse::<f64>()
                        .map(Value::Float)
                        .map_err(|_| NumericError::Parse(format!("not a number: `{s}`")))
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => rational_to_f64(r),
            Value::Float(v) => *v,
        }
    }

    pub fn checked_add(&self, rhs: &Value) -> Result<Value, NumericError> {
        self.combine(rhs, |a, b| a + b, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Value) -> Result<Value, NumericError> {
        self.combine(rhs, |a, b| a - b, |a, b| a - b)
    }

    pub fn checked_mul(&self, rhs: &Value) -> Result<Value, NumericError> {
        self.combine(rhs, |a, b| a * b, |a, b| a * b)
    }

    pub fn checked_div(&self, rhs: &Value) -> Result<Value, NumericError> {
        match rhs {
            Value::Exact(r) if r.is_zero() => return Err(NumericError::DivisionByZero),
            _ => {}
        }
        self.combine(rhs, |a, b| a / b, |a, b| a / b)
    }

    fn combine(
        &self,
        rhs: &Value,
        exact: impl Fn(&Rational, &Rational) -> Rational,
        float: impl Fn(f64, f64) -> f64,
    ) -> Result<Value, NumericError> {
        match (self, rhs) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Value::Exact(exact(a, b))),
            (Value::Float(a), Value::Float(b)) => Ok(Value::Float(float(*a, *b))),
            _ => Err(NumericError::MixedMode {
                left: self.mode(),
                right: rhs.mode(),
            }),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => f.write_str(&format_rational(r)),
            Value::Float(v) => write!(f, "{v}"),
        }
    }
}
