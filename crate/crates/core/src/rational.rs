//! Exact rational scalars and their text syntax.
//!
//! Every scalar in the crate is a [`Q`]. The canonical text form is the
//! lowest-terms fraction `p/q`, or a bare integer when the denominator is 1.
//! The parser additionally accepts finite decimals such as `-0.125`.

use num::{BigInt, BigRational, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};
use std::fmt;

use crate::error::Error;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Positive part `t ∨ 0`.
pub fn pos(t: &Q) -> Q {
    if t.is_positive() {
        t.clone()
    } else {
        Q::zero()
    }
}

pub fn format_q(v: &Q) -> String {
    v.to_string()
}

pub fn parse_q(text: &str) -> Result<Q, Error> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if frac_part.is_empty() && digits.is_empty() {
            return Err(bad());
        }
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        let whole: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| bad())?
        };
        let scale = num::pow(BigInt::from(10), frac_part.len());
        let fractional: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let magnitude = Q::new(whole * &scale + fractional, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Largest absolute value among the entries, zero for an empty slice.
pub fn max_abs(values: &[Q]) -> Q {
    values.iter().map(|v| v.abs()).fold(Q::zero(), |a, b| if b > a { b } else { a })
}

/// Serde adapters: rationals travel as `"p/q"` strings; integers are also
/// accepted on input.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(v))
    }

    struct QVisitor;

    impl<'de> Visitor<'de> for QVisitor {
        type Value = Q;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as \"p/q\", a decimal string, or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
            parse_q(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
            Ok(q(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
            Ok(Q::from_integer(BigInt::from(v)))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }

    /// A newtype so vectors and matrices of rationals can reuse the adapter.
    #[derive(Debug, Clone, PartialEq, Eq)]
    pub struct Wire(pub Q);

    impl serde::Serialize for Wire {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize(&self.0, s)
        }
    }

    impl<'de> serde::Deserialize<'de> for Wire {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            deserialize(d).map(Wire)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_syntaxes() {
        assert_eq!(parse_q("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_q("-7").unwrap(), q(-7));
        assert_eq!(parse_q("0.125").unwrap(), frac(1, 8));
        assert_eq!(parse_q("-1.5").unwrap(), frac(-3, 2));
        assert_eq!(parse_q(" 4/-8 ").unwrap(), frac(-1, 2));
        assert_eq!(parse_q(".5").unwrap(), frac(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1e5", "."] {
            assert!(parse_q(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_q(&frac(6, 4)), "3/2");
        assert_eq!(format_q(&frac(-4, 2)), "-2");
        assert_eq!(format_q(&q(0)), "0");
    }
}
