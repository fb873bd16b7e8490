//! Monoid algebras `F[M]` over `Q` or `F_p` with exponents in a Puiseux-style
//! monoid `M`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::monoid::engine::{Engine, Structure};
use crate::monoid::{is_member, Budget, Element, MonoidPresentation, Verdict};
use crate::numtheory::{is_prime, Rational};

/// Coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    Q,
    Fp(u64),
}

impl CoefficientField {
    pub fn fp(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return arg(format!("{p} is not prime"));
        }
        Ok(CoefficientField::Fp(p))
    }

    /// Canonical representative of `c` in this field.
    pub fn reduce(&self, c: &BigRational) -> Result<BigRational> {
        match self {
            CoefficientField::Q => Ok(c.clone()),
            CoefficientField::Fp(p) => {
                let p = BigInt::from(*p);
                let den = c.denom().mod_floor(&p);
                if den.is_zero() {
                    return Err(Error::Domain(format!("{c} has no image in F_{p}")));
                }
                // Fermat inverse
                let inv = den.modpow(&(&p - 2u32), &p);
                Ok(BigRational::from_integer((c.numer() * inv).mod_floor(&p)))
            }
        }
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Q => f.write_str("Q"),
            CoefficientField::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for CoefficientField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" || t == "QQ" {
            return Ok(CoefficientField::Q);
        }
        let digits = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| t.strip_prefix("F_"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| Error::Parse(format!("unknown coefficient field {s:?}")))?;
        let p: u64 = digits.parse().map_err(|_| Error::Parse(format!("unknown coefficient field {s:?}")))?;
        CoefficientField::fp(p)
    }
}

impl Serialize for CoefficientField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CoefficientField {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `sum c_i x^(q_i)` with nonzero coefficients and exponents in the monoid.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    field: CoefficientField,
    monoid: MonoidPresentation,
    terms: BTreeMap<Rational, BigRational>,
}

fn check_exponent(m: &MonoidPresentation, q: &Rational) -> Result<()> {
    match is_member(m, &Element::Rat(q.clone()), Budget::default())?.verdict {
        Verdict::Yes => Ok(()),
        Verdict::No => Err(Error::Domain(format!("exponent {q} is not in {m}"))),
        Verdict::UnknownAtBudget => Err(Error::Domain(format!("membership of exponent {q} in {m} is undecided"))),
    }
}

impl AlgebraElement {
    pub fn new(
        field: CoefficientField,
        monoid: MonoidPresentation,
        terms: impl IntoIterator<Item = (Rational, BigRational)>,
    ) -> Result<Self> {
        if monoid.is_pair_kind() {
            return arg("exponents must come from a monoid of rationals");
        }
        let mut out = AlgebraElement::zero(field, monoid);
        for (q, c) in terms {
            check_exponent(&out.monoid, &q)?;
            let c = field.reduce(&c)?;
            let slot = out.terms.entry(q).or_insert_with(BigRational::zero);
            *slot = field.reduce(&(&*slot + c))?;
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn zero(field: CoefficientField, monoid: MonoidPresentation) -> Self {
        AlgebraElement {
            field,
            monoid,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: CoefficientField, monoid: MonoidPresentation) -> Self {
        let mut out = AlgebraElement::zero(field, monoid);
        out.terms.insert(Rational::zero(), BigRational::one());
        out
    }

    pub fn monomial(field: CoefficientField, monoid: MonoidPresentation, c: BigRational, q: Rational) -> Result<Self> {
        AlgebraElement::new(field, monoid, [(q, c)])
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn monoid(&self) -> &MonoidPresentation {
        &self.monoid
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &BigRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<Rational> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, q: &Rational) -> BigRational {
        self.terms.get(q).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ring(&self, other: &AlgebraElement) -> Result<()> {
        if self.field != other.field {
            return arg(format!("coefficient fields differ: {} and {}", self.field, other.field));
        }
        if self.monoid != other.monoid {
            return arg(format!("exponent monoids differ: {} and {}", self.monoid, other.monoid));
        }
        Ok(())
    }

    fn with_terms(&self, terms: BTreeMap<Rational, BigRational>) -> AlgebraElement {
        AlgebraElement {
            field: self.field,
            monoid: self.monoid.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Result<AlgebraElement> {
        let mut terms = BTreeMap::new();
        for (q, c) in &self.terms {
            terms.insert(q.clone(), self.field.reduce(&-c)?);
        }
        Ok(self.with_terms(terms))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &BigRational) -> Result<AlgebraElement> {
        let c = self.field.reduce(c)?;
        let mut terms = BTreeMap::new();
        for (q, a) in &self.terms {
            let v = self.field.reduce(&(a * &c))?;
            if !v.is_zero() {
                terms.insert(q.clone(), v);
            }
        }
        Ok(self.with_terms(terms))
    }
}

pub fn ma_add(f: &AlgebraElement, g: &AlgebraElement) -> Result<AlgebraElement> {
    f.same_ring(g)?;
    let mut terms = f.terms.clone();
    for (q, c) in &g.terms {
        let slot = terms.entry(q.clone()).or_insert_with(BigRational::zero);
        *slot = f.field.reduce(&(&*slot + c))?;
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(f.with_terms(terms))
}

pub fn ma_mul(f: &AlgebraElement, g: &AlgebraElement) -> Result<AlgebraElement> {
    f.same_ring(g)?;
    let mut terms: BTreeMap<Rational, BigRational> = BTreeMap::new();
    for (a, c) in &f.terms {
        for (b, d) in &g.terms {
            let slot = terms.entry(a + b).or_insert_with(BigRational::zero);
            *slot = f.field.reduce(&(&*slot + c * d))?;
        }
    }
    terms.retain(|_, c| !c.is_zero());
    Ok(f.with_terms(terms))
}

pub fn ma_deg(f: &AlgebraElement) -> Result<Rational> {
    match f.terms.keys().next_back() {
        Some(q) => Ok(q.clone()),
        None => arg("the zero element has no degree"),
    }
}

pub fn ma_ord(f: &AlgebraElement) -> Result<Rational> {
    match f.terms.keys().next() {
        Some(q) => Ok(q.clone()),
        None => arg("the zero element has no order"),
    }
}

/// Gcd of the coefficients of an element with integer coefficients.
pub fn ma_content(f: &AlgebraElement) -> Result<BigInt> {
    let mut g = BigInt::zero();
    for c in f.terms.values() {
        if !c.is_integer() {
            return arg(format!("coefficient {c} is not an integer"));
        }
        g = g.gcd(&c.to_integer());
    }
    Ok(g.abs())
}

pub fn is_primitive(f: &AlgebraElement) -> Result<bool> {
    Ok(ma_content(f)?.is_one())
}

fn two_divisible(m: &MonoidPresentation) -> Result<bool> {
    if m.is_pair_kind() {
        return Ok(false);
    }
    Ok(matches!(
        Engine::new(m, Budget::default())?.structure(),
        Structure::Halving(_) | Structure::Trivial
    ))
}

/// `f = x^(ord f / 2) * (x^(-ord f / 2) f)`, both factors nonunits.
pub fn antimatter_split(f: &AlgebraElement) -> Result<(AlgebraElement, AlgebraElement)> {
    if !two_divisible(&f.monoid)? {
        return arg(format!("{} is not closed under halving", f.monoid));
    }
    let ord = ma_ord(f)?;
    if ord.is_zero() {
        return Err(Error::Precondition("split not applicable: nonzero constant term".into()));
    }
    let h = ord.half();
    let left = AlgebraElement::monomial(f.field, f.monoid.clone(), BigRational::one(), h.clone())?;
    let mut terms = BTreeMap::new();
    for (q, c) in &f.terms {
        let e = q.checked_sub(&h).expect("q >= ord f > ord f / 2");
        terms.insert(e, c.clone());
    }
    // each shifted exponent is rechecked for membership
    let right = AlgebraElement::new(f.field, f.monoid.clone(), terms)?;
    Ok((left, right))
}

fn fmt_coefficient(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (q, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            if q.is_zero() {
                f.write_str(&fmt_coefficient(&mag))?;
            } else {
                write!(f, "{}*x^({q})", fmt_coefficient(&mag))?;
            }
        }
        Ok(())
    }
}

fn parse_coefficient(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad coefficient {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

/// Parses `c1*x^(q1) + c2*x^(q2) - ...`; `x`, `x^q` and bare constants are accepted.
pub fn parse_terms(s: &str) -> Result<Vec<(Rational, BigRational)>> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    // split on + and - outside parentheses
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut depth = 0i32;
    let mut negative = false;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if !cur.is_empty() {
                    pieces.push((negative, std::mem::take(&mut cur)));
                } else if ch == '+' && !pieces.is_empty() {
                    return Err(Error::Parse(format!("dangling sign in {s:?}")));
                }
                negative = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if cur.is_empty() {
        return Err(Error::Parse(format!("dangling sign in {s:?}")));
    }
    pieces.push((negative, cur));
    let mut out = Vec::new();
    for (neg, term) in pieces {
        let (coeff, power) = match term.find('x') {
            None => (term.as_str(), None),
            Some(i) => {
                let c = term[..i].strip_suffix('*').unwrap_or(&term[..i]);
                (c, Some(&term[i + 1..]))
            }
        };
        let mut c = if coeff.is_empty() { BigRational::one() } else { parse_coefficient(coeff)? };
        if neg {
            c = -c;
        }
        let q = match power {
            None => Rational::zero(),
            Some("") => Rational::one(),
            Some(p) => {
                let p = p.strip_prefix('^').ok_or_else(|| Error::Parse(format!("bad term {term:?}")))?;
                let p = p.strip_prefix('(').and_then(|p| p.strip_suffix(')')).unwrap_or(p);
                p.parse()?
            }
        };
        out.push((q, c));
    }
    Ok(out)
}

impl AlgebraElement {
    pub fn parse(field: CoefficientField, monoid: MonoidPresentation, s: &str) -> Result<Self> {
        AlgebraElement::new(field, monoid, parse_terms(s)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": self.field.to_string(),
            "monoid": self.monoid.to_json(),
            "terms": self.terms.iter().map(|(q, c)| serde_json::json!({
                "exponent": q.to_string(),
                "coefficient": fmt_coefficient(c),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("algebra element JSON: {what}"));
        let field: CoefficientField = v["field"].as_str().ok_or_else(|| bad("missing field"))?.parse()?;
        let monoid = MonoidPresentation::from_json(&v["monoid"])?;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let q: Rational = t["exponent"].as_str().ok_or_else(|| bad("missing exponent"))?.parse()?;
            let c = parse_coefficient(t["coefficient"].as_str().ok_or_else(|| bad("missing coefficient"))?)?;
            terms.push((q, c));
        }
        AlgebraElement::new(field, monoid, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dy(s: &str) -> AlgebraElement {
        AlgebraElement::parse(CoefficientField::Q, MonoidPresentation::dyadic(), s).unwrap()
    }

    #[test]
    fn squares_and_identity() {
        let f = dy("1 + x^(1/2)");
        assert_eq!(ma_mul(&f, &f).unwrap(), dy("1 + 2*x^(1/2) + x"));
        let one = AlgebraElement::one(CoefficientField::Q, MonoidPresentation::dyadic());
        assert_eq!(ma_mul(&f, &one).unwrap(), f);
        let h = AlgebraElement::parse(CoefficientField::Fp(2), MonoidPresentation::dyadic(), "x^(1/2)").unwrap();
        assert_eq!(ma_mul(&h, &h).unwrap().to_string(), "1*x^(1)");
        // characteristic 2 kills the middle term
        let g = AlgebraElement::parse(CoefficientField::Fp(2), MonoidPresentation::dyadic(), "1 + x^(1/2)").unwrap();
        assert_eq!(ma_mul(&g, &g).unwrap().to_string(), "1 + 1*x^(1)");
    }

    #[test]
    fn degree_order_content() {
        let f = dy("x^(1/2) + x^2");
        assert_eq!(ma_deg(&f).unwrap(), Rational::integer(2));
        assert_eq!(ma_ord(&f).unwrap(), Rational::new(1, 2));
        let c = dy("7");
        assert_eq!((ma_deg(&c).unwrap(), ma_ord(&c).unwrap()), (Rational::zero(), Rational::zero()));
        assert_eq!(ma_content(&dy("2*x + 4*x^3")).unwrap(), BigInt::from(2));
        assert_eq!(ma_content(&dy("3")).unwrap(), BigInt::from(3));
        assert!(is_primitive(&dy("3*x + 5")).unwrap());
        assert!(ma_content(&dy("1/2*x")).is_err());
        assert!(ma_deg(&dy("0")).is_err());
    }

    #[test]
    fn splits() {
        let (a, b) = antimatter_split(&dy("x^(3/2) + x^2")).unwrap();
        assert_eq!(a, dy("x^(3/4)"));
        assert_eq!(b, dy("x^(3/4) + x^(5/4)"));
        let (a, b) = antimatter_split(&dy("x")).unwrap();
        assert_eq!((a.to_string(), b.to_string()), ("1*x^(1/2)".into(), "1*x^(1/2)".into()));
        assert!(matches!(antimatter_split(&dy("1 + x")), Err(Error::Precondition(_))));
        let fg = MonoidPresentation::fg_puiseux(vec![Rational::one()]).unwrap();
        let f = AlgebraElement::parse(CoefficientField::Q, fg, "x").unwrap();
        assert!(matches!(antimatter_split(&f), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn rejects_foreign_exponents_and_mixed_rings() {
        let fg = MonoidPresentation::fg_puiseux(vec![Rational::integer(2), Rational::integer(3)]).unwrap();
        assert!(matches!(AlgebraElement::parse(CoefficientField::Q, fg, "x"), Err(Error::Domain(_))));
        let f = dy("x");
        let g = AlgebraElement::parse(CoefficientField::Fp(3), MonoidPresentation::dyadic(), "x").unwrap();
        assert!(matches!(ma_add(&f, &g), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn text_and_json_round_trip() {
        let f = dy("-3/2 + x^(1/4) - 5*x^(3)");
        assert_eq!(f.to_string(), "-3/2 + 1*x^(1/4) - 5*x^(3)");
        assert_eq!(dy(&f.to_string()), f);
        assert_eq!(AlgebraElement::from_json(&f.to_json()).unwrap(), f);
        let g = AlgebraElement::parse(CoefficientField::Fp(5), MonoidPresentation::dyadic(), "7 + 1/2*x").unwrap();
        assert_eq!(g.to_string(), "2 + 3*x^(1)");
    }
}
