//! Exact rationals and their textual form.
//!
//! Rationals are written as `"a/b"`, or `"a"` when the denominator is 1.
//! Parsing accepts either form plus surrounding whitespace; the result is
//! always reduced with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().map_err(|_| bad())?;
            let d = d.trim().parse::<BigInt>().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Returns the integer value of `q` when it has denominator 1.
pub fn as_integer(q: &Rational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// JSON-facing rational: a string `"a/b"`, or a bare JSON integer on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonRational(pub Rational);

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) => Ok(JsonRational(int(n))),
            Raw::Str(s) => parse_rational(&s)
                .map(JsonRational)
                .map_err(serde::de::Error::custom),
        }
    }
}
