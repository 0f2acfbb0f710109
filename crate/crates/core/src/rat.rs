//! Small helpers around `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerators/denominators: shift to keep the ratio representable
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = (n.max(d) - 900).max(0) as usize;
        let nn = (x.numer() >> shift).to_f64().unwrap_or(0.0);
        let dd = (x.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
        nn / dd
    })
}

/// Integer power with a signed exponent.
pub fn pow(base: &Q, e: i64) -> Q {
    let mut acc = Q::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Parses `"3"`, `"-1/3"` or a finite decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((a, b)) = t.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let whole: BigInt = if ip.is_empty() {
            BigInt::zero()
        } else {
            ip.parse().map_err(|_| bad())?
        };
        let frac: BigInt = fp.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let v = BigRational::new(whole * &den + frac, den);
        return Ok(if neg { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn fmt(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact square root when `x` is the square of a rational.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_q {
    use super::{fmt, parse, Q};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse("-1/3").unwrap(), q(-1, 3));
        assert_eq!(parse("0.25").unwrap(), q(1, 4));
        assert_eq!(parse("-0.5").unwrap(), q(-1, 2));
        assert_eq!(parse("7").unwrap(), qi(7));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(exact_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(exact_sqrt(&q(1, 2)), None);
        assert_eq!(exact_sqrt(&q(-1, 4)), None);
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow(&q(2, 3), 3), q(8, 27));
        assert_eq!(pow(&q(2, 3), -2), q(9, 4));
        assert_eq!(fmt(&q(6, 4)), "3/2");
    }
}
