//! Exact rationals, primes and p-adic valuations.

mod primes;
mod rational;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

pub use primes::{factorize, is_prime, nth_prime, PrimeKind, PrimeSequence};
pub use rational::Rational;

use crate::error::{arg, Result};

/// A p-adic valuation; zero has valuation `Infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    while (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// The exponent of `p` in the signed rational `q`.
pub fn padic_valuation_signed(q: &BigRational, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return arg(format!("{p} is not prime"));
    }
    if q.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let p = BigInt::from(p);
    Ok(Valuation::Finite(
        int_valuation(q.numer(), &p) - int_valuation(q.denom(), &p),
    ))
}

pub fn padic_valuation(q: &Rational, p: u64) -> Result<Valuation> {
    padic_valuation_signed(q.as_big(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(
            padic_valuation(&Rational::new(3, 4), 2).unwrap(),
            Valuation::Finite(-2)
        );
        assert_eq!(
            padic_valuation(&Rational::zero(), 5).unwrap(),
            Valuation::Infinity
        );
        // a_1 = (2 + 1) / 2^2
        let a1 = Rational::new(2 + 1, 4);
        assert_eq!(padic_valuation(&a1, 2).unwrap(), Valuation::Finite(-2));
        assert_eq!(padic_valuation(&a1, 3).unwrap(), Valuation::Finite(1));
        assert!(padic_valuation(&a1, 4).is_err());
    }

    #[test]
    fn signed_valuation() {
        let q = BigRational::new((-18).into(), 5.into());
        assert_eq!(padic_valuation_signed(&q, 3).unwrap(), Valuation::Finite(2));
        assert_eq!(padic_valuation_signed(&q, 5).unwrap(), Valuation::Finite(-1));
    }
}
