//! Exact rational and complex-rational scalars.
//!
//! Everything in the symbolic layer is carried as `BigRational`, including the
//! real and imaginary parts of coefficients. Floating-point literals are
//! rejected at the parsing boundary so that identities can be checked for
//! exact equality.

use std::str::FromStr;

use num::{BigInt, BigRational, Complex, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type ComplexExact = Complex<Rational>;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn real(r: Rational) -> ComplexExact {
    Complex::new(r, Rational::zero())
}

pub fn imag(r: Rational) -> ComplexExact {
    Complex::new(Rational::zero(), r)
}

pub fn c_one() -> ComplexExact {
    Complex::new(Rational::one(), Rational::zero())
}

pub fn c_i() -> ComplexExact {
    Complex::new(Rational::zero(), Rational::one())
}

pub fn c_zero() -> ComplexExact {
    Complex::new(Rational::zero(), Rational::zero())
}

pub fn is_real(z: &ComplexExact) -> bool {
    z.im.is_zero()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn to_c64(z: &ComplexExact) -> Complex<f64> {
    Complex::new(to_f64(&z.re), to_f64(&z.im))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Parses `"3"`, `"-3/2"` or `"+7/4"` into an exact rational.
///
/// Decimal points and exponents are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    if t.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!(
            "`{text}` is a floating-point literal; exact rationals such as 1/2 are required"
        )));
    }
    let r = Rational::from_str(t).map_err(|_| Error::Parse(format!("`{text}` is not a rational")))?;
    Ok(r)
}

/// Parses a comma separated coefficient list such as `"3/2, -1, 0, 2"`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

pub fn format_complex(z: &ComplexExact) -> String {
    format!("({},{})", z.re, z.im)
}

pub fn parse_complex(text: &str) -> Result<ComplexExact> {
    let inner = text
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("coefficient `{text}` must look like (re,im)")))?;
    let (re, im) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("coefficient `{text}` is missing a comma")))?;
    Ok(Complex::new(parse_rational(re)?, parse_rational(im)?))
}

/// Serde adapter storing a rational as its exact string form.
///
/// Integers are accepted on input for convenience; JSON floats are refused.
pub mod serde_rational {
    use super::{parse_rational, Rational};
    use serde::{de, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub(crate) struct RationalVisitor;

    impl<'de> de::Visitor<'de> for RationalVisitor {
        type Value = Rational;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an exact rational such as \"3/2\" or an integer")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
            parse_rational(v).map_err(E::custom)
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
            Ok(super::integer(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
            i64::try_from(v)
                .map(super::integer)
                .map_err(|_| E::custom("integer out of range"))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
            Err(E::custom(format!(
                "floating-point value {v} rejected; give exact rationals as strings like \"1/2\""
            )))
        }
    }
}

/// Serde adapter for coefficient lists: accepts `["1/2", 0, "3"]` or the
/// comma separated string form `"1/2, 0, 3"`.
pub mod serde_rational_list {
    use super::{parse_rational_list, Rational};
    use serde::{de, ser::SerializeSeq, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&r.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        d.deserialize_any(ListVisitor)
    }

    struct ListVisitor;

    impl<'de> de::Visitor<'de> for ListVisitor {
        type Value = Vec<Rational>;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a list of exact rationals")
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
            parse_rational_list(v).map_err(E::custom)
        }

        fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
            let mut out = Vec::new();
            while let Some(Elem(r)) = seq.next_element()? {
                out.push(r);
            }
            Ok(out)
        }
    }

    struct Elem(Rational);

    impl<'de> de::Deserialize<'de> for Elem {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            d.deserialize_any(super::serde_rational::RationalVisitor).map(Elem)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("-3/2").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational(" 4 ").unwrap(), integer(4));
        assert_eq!(parse_rational("+6/4").unwrap(), rational(3, 2));
    }

    #[test]
    fn rejects_floats() {
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn list_and_complex_round_trip() {
        let v = parse_rational_list("3/2, -1, 0, 2").unwrap();
        assert_eq!(v, vec![rational(3, 2), integer(-1), integer(0), integer(2)]);
        let z = Complex::new(rational(-1, 3), integer(2));
        assert_eq!(parse_complex(&format_complex(&z)).unwrap(), z);
    }
}
