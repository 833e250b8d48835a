//! Exact rational scalars and their text form.
//!
//! Coordinates are carried as [`Rational`] everywhere combinatorial decisions
//! are made. The text form is `"p/q"` (or a bare integer `"p"`), which is what
//! the JSON schemas use so that values survive a round-trip without touching
//! floating point.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("non-finite float {0}")]
    NonFinite(f64),
}

/// Parses `"p/q"`, `"p"`, or a plain decimal such as `"-0.125"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(RationalParseError::Empty);
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|_| RationalParseError::Malformed(t.to_string()))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|_| RationalParseError::Malformed(t.to_string()))?;
        if d.is_zero() {
            return Err(RationalParseError::ZeroDenominator(t.to_string()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Ok(n) = BigInt::from_str(t) {
        return Ok(Rational::from_integer(n));
    }
    parse_decimal(t).ok_or_else(|| RationalParseError::Malformed(t.to_string()))
}

fn parse_decimal(t: &str) -> Option<Rational> {
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mantissa, exponent) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num::pow(ten, scale as usize);
    } else {
        value /= num::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Canonical text form: `"p/q"` with `q > 1`, or `"p"` for integers.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact conversion of a finite `f64` (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Result<Rational, RationalParseError> {
    Rational::from_float(x).ok_or(RationalParseError::NonFinite(x))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Huge numerator/denominator pairs: scale both down before dividing.
        let n = value.numer();
        let d = value.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(900);
        let ns = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let ds = (d >> shift).to_f64().unwrap_or(f64::NAN);
        ns / ds
    })
}

/// Rounds `x` to the nearest multiple of `2^-bits`.
pub fn quantize(x: f64, bits: u32) -> Rational {
    let scale = (bits as f64).exp2();
    let n = (x * scale).round();
    Rational::new(BigInt::from(n as i64), BigInt::from(1u64) << bits as usize)
}

pub fn small(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn sign_of(value: &Rational) -> i8 {
    match value.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

pub fn abs(value: &Rational) -> Rational {
    value.abs()
}

/// Serde adapter for `Rational` as a `"p/q"` string.
pub mod serde_rational {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of `"p/q"` strings.
pub mod serde_rational_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}
