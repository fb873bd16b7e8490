//! Finite fields `GF(p^m) = F_p[a] / (f)` with `f` the smallest monic
//! irreducible of degree `m`.

use std::fmt;
use std::str::FromStr;

use crate::error::{arg, Error, Result};
use crate::numtheory::is_prime;

/// Fields with more elements than this are refused.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Coefficients `a_0 .. a_{m-1}` of `a_0 + a_1 a + ...`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(Vec<u64>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    m: usize,
    /// `f_0 .. f_{m-1}` of the monic modulus `x^m + f_{m-1} x^{m-1} + ... + f_0`.
    modulus: Vec<u64>,
}

/// Base-`p` digits of `n`, least significant first.
fn digits(mut n: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = n % p;
        n /= p;
    }
    out
}

/// Remainder of `a` modulo the monic `b` (coefficients low to high, `b` including its leading 1).
fn poly_rem(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    while a.len() > db {
        let lead = a.pop().expect("nonempty");
        if lead == 0 {
            continue;
        }
        let shift = a.len() - db;
        for (i, &bc) in b[..db].iter().enumerate() {
            let j = shift + i;
            a[j] = (a[j] + (p - lead) * bc % p) % p;
        }
    }
    a
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for n in 0..count {
            let mut g = digits(n, p, d);
            g.push(1);
            if poly_rem(f.to_vec(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    pub fn new(p: u64, m: usize) -> Result<Self> {
        if !is_prime(p) {
            return arg(format!("{p} is not prime"));
        }
        if m == 0 {
            return arg("the degree must be positive");
        }
        let size = u32::try_from(m).ok().and_then(|m| p.checked_pow(m));
        if size.is_none_or(|s| s > MAX_FIELD_SIZE) {
            return Err(Error::TooLarge(format!("GF({p}^{m}) is beyond the desk-scale limit")));
        }
        // candidates ordered by the base-p value of (f_{m-1}, .., f_0)
        let count = p.pow(m as u32);
        for n in 0..count {
            let mut f = digits(n, p, m);
            f.push(1);
            if is_irreducible(&f, p) {
                f.pop();
                return Ok(FiniteField { p, m, modulus: f });
            }
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    /// The modulus, constant term first, leading 1 included.
    pub fn modulus(&self) -> Vec<u64> {
        let mut f = self.modulus.clone();
        f.push(1);
        f
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.m])
    }

    pub fn one(&self) -> FieldElement {
        self.scalar(1)
    }

    /// The image of the integer `c` in the prime field.
    pub fn scalar(&self, c: u64) -> FieldElement {
        let mut v = vec![0; self.m];
        v[0] = c % self.p;
        FieldElement(v)
    }

    /// The class of `x`, a root of the modulus.
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            // x = -f_0 in F_p
            return self.scalar((self.p - self.modulus[0]) % self.p);
        }
        let mut v = vec![0; self.m];
        v[1] = 1;
        FieldElement(v)
    }

    pub fn element(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.m {
            return arg(format!("{} coefficients for a field of degree {}", coeffs.len(), self.m));
        }
        let mut v: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        v.resize(self.m, 0);
        Ok(FieldElement(v))
    }

    /// The element whose coefficients are the base-`p` digits of `n`.
    pub fn from_index(&self, n: u64) -> FieldElement {
        FieldElement(digits(n, self.p, self.m))
    }

    pub fn index(&self, a: &FieldElement) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.size()).map(|n| self.from_index(n))
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.size()).map(|n| self.from_index(n))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut prod = vec![0u64; 2 * self.m - 1];
        for (i, x) in a.0.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let mut r = poly_rem(prod, &self.modulus(), self.p);
        r.resize(self.m, 0);
        FieldElement(r)
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return arg("zero has no inverse");
        }
        Ok(self.pow(a, self.size() - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Whether `a` lies in the subfield with `p^d` elements.
    pub fn in_subfield(&self, a: &FieldElement, d: usize) -> Result<bool> {
        self.check_subfield(d)?;
        Ok(self.pow(a, self.p.pow(d as u32)) == *a)
    }

    pub fn check_subfield(&self, d: usize) -> Result<()> {
        if d == 0 || !self.m.is_multiple_of(d) {
            return arg(format!("GF({}^{d}) is not a subfield of {self}", self.p));
        }
        Ok(())
    }

    /// Parses `[a0,a1,..]` or a prime-field integer.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let t = s.trim();
        let bad = || Error::Parse(format!("bad field element {s:?}"));
        if let Some(inner) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coeffs: Vec<u64> = inner
                .split(',')
                .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            return self.element(&coeffs);
        }
        Ok(self.scalar(t.parse().map_err(|_| bad())?))
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

/// Parses `GF(p^m)`, `GF(q)` or `F_q` into `(p, m)`.
pub fn parse_field_spec(s: &str) -> Result<(u64, usize)> {
    let t = s.trim();
    let bad = || Error::Parse(format!("bad field {s:?}; expected GF(p^m)"));
    let inner = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix("F_"))
        .ok_or_else(bad)?;
    if let Some((p, m)) = inner.split_once('^') {
        return Ok((p.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?));
    }
    let q: u64 = inner.trim().parse().map_err(|_| bad())?;
    for p in 2..=q {
        if q.is_multiple_of(p) {
            // q must be a power of its smallest prime factor
            let (mut r, mut m) = (q, 0usize);
            while r % p == 0 {
                r /= p;
                m += 1;
            }
            return if r == 1 { Ok((p, m)) } else { Err(bad()) };
        }
    }
    Err(bad())
}

impl FromStr for FiniteField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, m) = parse_field_spec(s)?;
        FiniteField::new(p, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), vec![1, 1, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), vec![1, 1, 0, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), vec![1, 0, 1]);
        assert_eq!(FiniteField::new(2, 4).unwrap().modulus(), vec![1, 1, 0, 0, 1]);
        assert_eq!(FiniteField::new(5, 1).unwrap().modulus(), vec![0, 1]);
    }

    #[test]
    fn field_axioms_exhaustively() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (2, 4)] {
            let k = FiniteField::new(p, m).unwrap();
            let all: Vec<FieldElement> = k.elements().collect();
            for a in &all {
                assert_eq!(k.add(a, &k.neg(a)), k.zero());
                if !a.is_zero() {
                    assert_eq!(k.mul(a, &k.inv(a).unwrap()), k.one());
                }
                for b in &all {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    if !a.is_zero() && !b.is_zero() {
                        assert!(!k.mul(a, b).is_zero());
                    }
                    for c in &all {
                        assert_eq!(k.mul(a, &k.add(b, c)), k.add(&k.mul(a, b), &k.mul(a, c)));
                        assert_eq!(k.mul(&k.mul(a, b), c), k.mul(a, &k.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn subfields() {
        let k = FiniteField::new(2, 4).unwrap();
        let count = k.elements().filter(|a| k.in_subfield(a, 2).unwrap()).count();
        assert_eq!(count, 4);
        assert!(k.in_subfield(&k.one(), 1).unwrap());
        assert!(k.check_subfield(3).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_field_spec("GF(2^3)").unwrap(), (2, 3));
        assert_eq!(parse_field_spec("GF(9)").unwrap(), (3, 2));
        assert_eq!(parse_field_spec("F_4").unwrap(), (2, 2));
        assert!(parse_field_spec("GF(6)").is_err());
        let k: FiniteField = "GF(4)".parse().unwrap();
        assert_eq!(k.parse_element("[0,1]").unwrap(), k.generator());
        assert_eq!(k.generator().to_string(), "[0,1]");
    }
}
