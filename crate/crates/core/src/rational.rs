//! Exact rational numbers and their `"p/q"` string encoding.
//!
//! Every measure, trace and distance in the crate is a [`Rational`]. On the
//! wire a rational is always a string `"p/q"` in lowest terms with `q > 0`
//! (integers are written `"n/1"`). Parsing also accepts a bare integer and
//! non-reduced fractions, which are normalized.

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational {input:?}: {reason}")]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: s.to_string(),
        reason,
    };
    let s_trim = s.trim();
    let (num, den) = match s_trim.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s_trim, "1"),
    };
    let num: i64 = num
        .parse()
        .map_err(|_| err("numerator is not an integer"))?;
    let den: i64 = den
        .parse()
        .map_err(|_| err("denominator is not an integer"))?;
    if den <= 0 {
        return Err(err("denominator must be positive"));
    }
    Ok(Rational::new(num, den))
}

/// Lowest-terms `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    let r = r.reduced();
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn abs_diff(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

pub fn is_unit_interval(r: &Rational) -> bool {
    *r > Rational::zero() && *r <= Rational::one()
}

/// Serde adapter for a single rational field.
pub mod serde_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_opt_str {
    use super::{format_rational, parse_rational, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_rational(&s).map_err(de::Error::custom))
            .transpose()
    }
}
