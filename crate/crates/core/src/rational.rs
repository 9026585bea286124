//! Exact rational helpers shared by every module.
//!
//! All game data (weights, shares, preferences, utilities) is carried as
//! arbitrary-precision rationals. Text form is always `p/q`, so `3` renders as
//! `"3/1"`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"p/q"` or a plain integer literal. Decimal points are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        literal: text.to_string(),
        reason,
    };
    let trimmed = text.trim();
    if trimmed.contains('.') || trimmed.contains('e') || trimmed.contains('E') {
        return Err(err("decimal literals are not exact; use p/q"));
    }
    let (numer, denom) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let numer: BigInt = numer
        .parse()
        .map_err(|_| err("numerator is not an integer"))?;
    let denom: BigInt = denom
        .parse()
        .map_err(|_| err("denominator is not an integer"))?;
    if denom.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical `p/q` rendering (denominator always present and positive).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// A rational that may also be `+∞` (disparities, improvement factors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// `numer / denom` for non-negative operands; `x/0` with `x > 0` is infinite
    /// and `0/0` is reported as 1.
    pub fn quotient(numer: &Rational, denom: &Rational) -> Extended {
        if denom.is_zero() {
            if numer.is_zero() {
                Extended::Finite(Rational::one())
            } else {
                Extended::Infinite
            }
        } else {
            Extended::Finite(numer / denom)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => to_f64(v),
            Extended::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering::*;
        match (self, other) {
            (Extended::Infinite, Extended::Infinite) => Equal,
            (Extended::Infinite, _) => Greater,
            (_, Extended::Infinite) => Less,
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => f.write_str(&format_rational(v)),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Serde adapter: accepts `"p/q"` strings or JSON integers, rejects floats,
/// and always writes `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalLiteral(pub Rational);

impl Serialize for RationalLiteral {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalLiteral {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl serde::de::Visitor<'_> for Visitor {
            type Value = RationalLiteral;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(RationalLiteral(int(v)))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(RationalLiteral(Rational::from_integer(BigInt::from(v))))
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Err(E::custom(format!(
                    "decimal number {v} is not allowed; write rationals as \"p/q\""
                )))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Self::Value, E> {
                parse_rational(v).map(RationalLiteral).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" -2/4 ").unwrap(), ratio(-1, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&int(3)), "3/1");
        assert_eq!(format_rational(&ratio(17, 5)), "17/5");
    }

    #[test]
    fn literal_rejects_json_floats() {
        let ok: RationalLiteral = serde_json::from_str("\"12/7\"").unwrap();
        assert_eq!(ok.0, ratio(12, 7));
        let ok: RationalLiteral = serde_json::from_str("4").unwrap();
        assert_eq!(ok.0, int(4));
        assert!(serde_json::from_str::<RationalLiteral>("0.25").is_err());
    }

    #[test]
    fn extended_ordering() {
        assert!(Extended::Infinite > Extended::Finite(int(1_000_000)));
        assert_eq!(
            Extended::quotient(&int(0), &int(0)),
            Extended::Finite(int(1))
        );
        assert_eq!(Extended::quotient(&int(2), &int(0)), Extended::Infinite);
        assert_eq!(Extended::Infinite.to_string(), "inf");
    }
}
