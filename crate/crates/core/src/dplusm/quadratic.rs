//! `Q(sqrt 2)` over `Q`, where `K^x / k^x` is infinite.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{arg, Result};

/// `a + b sqrt 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticElement {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadraticElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadraticElement { a, b }
    }

    pub fn one() -> Self {
        QuadraticElement::new(BigRational::one(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn mul(&self, o: &QuadraticElement) -> QuadraticElement {
        let two = BigRational::from_integer(2.into());
        QuadraticElement::new(&self.a * &o.a + two * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }

    pub fn conjugate(&self) -> QuadraticElement {
        QuadraticElement::new(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - 2 b^2`.
    pub fn norm(&self) -> BigRational {
        let two = BigRational::from_integer(2.into());
        &self.a * &self.a - two * &self.b * &self.b
    }

    pub fn inv(&self) -> Result<QuadraticElement> {
        if self.is_zero() {
            return arg("zero has no inverse");
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(QuadraticElement::new(c.a / &n, c.b / n))
    }
}

impl fmt::Display for QuadraticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt2", self.a, self.b)
    }
}

/// `u Q^x = v Q^x`, i.e. `u / v` is rational.
pub fn sqrt2_same_coset(u: &QuadraticElement, v: &QuadraticElement) -> Result<bool> {
    Ok(u.mul(&v.inv()?).is_rational())
}

/// Twists `(u t)(u^-1 t)` of `t^2` for `u = 1 + j sqrt 2`, `j = 0..count`; the
/// `u` lie in pairwise distinct cosets of `Q^x`.
pub fn sqrt2_twist_family(count: usize) -> Result<Vec<(QuadraticElement, QuadraticElement)>> {
    (0..count)
        .map(|j| {
            let u = QuadraticElement::new(BigRational::one(), BigRational::from_integer(j.into()));
            let inv = u.inv()?;
            Ok((u, inv))
        })
        .collect()
}
