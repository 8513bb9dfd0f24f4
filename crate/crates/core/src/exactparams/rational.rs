//! Parsing and formatting of exact rationals.
//!
//! Accepted inputs: integers (`"3"`), fractions (`"47/10"`), and decimals
//! with an optional exponent (`"2.8"`, `"-1.25e-3"`). Decimals are read as
//! exact decimal fractions, never through `f64`.

use num::bigint::BigInt;
use num::{BigRational, Signed, ToPrimitive, Zero};

use super::ParamError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn parse_rational(text: &str) -> Result<Rational, ParamError> {
    let s = text.trim();
    let bad = || ParamError::Parse(format!("not an exact rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ParamError::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let n: BigInt = all_digits.parse().map_err(|_| bad())?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(n);
    if scale >= 0 {
        value *= Rational::from_integer(num::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// `"num/den"`, or just `"num"` for integers.
pub fn fmt_rational(x: &Rational) -> String {
    x.to_string()
}

pub fn to_f64(x: &Rational) -> f64 {
    // Ratio::to_f64 is exact-rounding for moderate sizes; fall back to a
    // quotient of scaled integers for huge numerators and denominators.
    x.to_f64().unwrap_or_else(|| {
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub mod serde_rational {
    //! Serialize a rational as its exact string form.
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("47/10").unwrap(), rat(47, 10));
        assert_eq!(parse_rational("4.7").unwrap(), rat(47, 10));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2.8").unwrap(), rat(14, 5));
        assert_eq!(parse_rational("1.5e-2").unwrap(), rat(3, 200));
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("2E1").unwrap(), int(20));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1/0", "1.2.3", "--1", "e5", "."] {
            assert!(parse_rational(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(fmt_rational(&int(1)), "1");
        assert_eq!(fmt_rational(&rat(5, 282)), "5/282");
        assert_eq!(fmt_rational(&rat(-6, 1)), "-6");
    }
}
