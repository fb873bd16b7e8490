use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A nonnegative rational number, always stored in lowest terms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`; panics if `denom == 0`.
    pub fn new(numer: u64, denom: u64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(n: u64) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// Accepts any signed rational that happens to be nonnegative.
    pub fn from_big(q: BigRational) -> Option<Self> {
        if q.is_negative() {
            None
        } else {
            Some(Rational(q))
        }
    }

    pub fn from_parts(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Rational::from_big(BigRational::new(numer, denom))
            .ok_or_else(|| Error::InvalidArgument("negative rational".into()))
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The reduced denominator as a machine integer, if it fits.
    pub fn denom_u64(&self) -> Option<u64> {
        self.0.denom().to_u64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// `self - other`, or `None` when the difference leaves the nonnegative rationals.
    pub fn checked_sub(&self, other: &Rational) -> Option<Rational> {
        if other > self {
            None
        } else {
            Some(Rational(&self.0 - &other.0))
        }
    }

    pub fn mul_int(&self, k: u64) -> Rational {
        Rational(&self.0 * BigRational::from_integer(k.into()))
    }

    /// Division by a positive integer; panics on zero.
    pub fn div_int(&self, k: u64) -> Rational {
        assert!(k != 0, "division by zero");
        Rational(&self.0 / BigRational::from_integer(k.into()))
    }

    pub fn div(&self, other: &Rational) -> Option<Rational> {
        if other.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &other.0))
        }
    }

    pub fn half(&self) -> Rational {
        self.div_int(2)
    }

    /// The least common multiple of the denominators of `values`.
    pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
        values
            .into_iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str) -> Result<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("expected digits, got {s:?}")));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

impl FromStr for Rational {
    type Err = Error;

    /// `"a/b"` or `"a"`, no whitespace or sign; reduced on parse.
    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (parse_digits(n)?, parse_digits(d)?),
            None => (parse_digits(s)?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces() {
        let q: Rational = "6/8".parse().unwrap();
        assert_eq!(q, Rational::new(3, 4));
        assert_eq!(q.to_string(), "3/4");
        assert_eq!("12/4".parse::<Rational>().unwrap().to_string(), "3");
    }

    #[test]
    fn parse_rejects_malformed() {
        for s in ["", "1/0", "-1/2", " 1/2", "1/2/3", "a", "1.5", "+3"] {
            assert!(s.parse::<Rational>().is_err(), "{s}");
        }
    }

    #[test]
    fn subtraction_signals_negative() {
        let a = Rational::new(1, 2);
        let b = Rational::new(2, 3);
        assert_eq!(a.checked_sub(&b), None);
        assert_eq!(b.checked_sub(&a), Some(Rational::new(1, 6)));
        assert_eq!(a.checked_sub(&a), Some(Rational::zero()));
    }

    #[test]
    fn common_denominator_is_lcm() {
        let v = [Rational::new(3, 4), Rational::new(5, 6), Rational::integer(2)];
        assert_eq!(Rational::common_denominator(&v), BigInt::from(12));
    }
}
