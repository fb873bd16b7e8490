use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{arg, Error, Result};
use crate::numtheory::{nth_prime, PrimeKind, Rational};

/// An element of a presented monoid: a nonnegative rational for the
/// Puiseux-style presentations, an integer pair for the quadrant union.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Rat(Rational),
    Pair(i64, i64),
}

impl Element {
    pub fn rat(n: u64, d: u64) -> Self {
        Element::Rat(Rational::new(n, d))
    }

    pub fn int(n: u64) -> Self {
        Element::Rat(Rational::integer(n))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Element::Rat(q) => Some(q),
            Element::Pair(..) => None,
        }
    }

    pub fn as_pair(&self) -> Option<(i64, i64)> {
        match *self {
            Element::Pair(a, b) => Some((a, b)),
            Element::Rat(_) => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Rat(q) => q.is_zero(),
            Element::Pair(a, b) => *a == 0 && *b == 0,
        }
    }
}

impl From<Rational> for Element {
    fn from(q: Rational) -> Self {
        Element::Rat(q)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Rat(q) => write!(f, "{q}"),
            Element::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected (a,b), got {s:?}")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
            };
            return Ok(Element::Pair(parse(a)?, parse(b)?));
        }
        Ok(Element::Rat(s.parse()?))
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

type Extension = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

/// A user-supplied generator family: an explicit prefix followed by an
/// optional rule for later indices.
///
/// `halving` asserts that every generator is twice the next one
/// (`a_{n+1} = a_n / 2`); the assertion is checked on every materialized
/// window and is what makes the monoid 2-divisible.
#[derive(Clone)]
pub struct CustomFamily {
    name: String,
    prefix: Vec<Rational>,
    extension: Option<Extension>,
    halving: bool,
}

impl CustomFamily {
    pub fn new(name: impl Into<String>, prefix: Vec<Rational>) -> Result<Self> {
        if prefix.iter().any(Rational::is_zero) {
            return arg("family generators must be positive");
        }
        let mut seen = prefix.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != prefix.len() {
            return arg("family generators must be pairwise distinct");
        }
        Ok(CustomFamily {
            name: name.into(),
            prefix,
            extension: None,
            halving: false,
        })
    }

    pub fn with_extension(
        mut self,
        rule: impl Fn(usize) -> Rational + Send + Sync + 'static,
    ) -> Self {
        self.extension = Some(Arc::new(rule));
        self
    }

    /// Generators `1, 1/2, 1/4, ...`: the dyadic monoid `N0[1/2]`.
    pub fn dyadic() -> Self {
        CustomFamily {
            name: "dyadic".into(),
            prefix: Vec::new(),
            extension: Some(Arc::new(|n| {
                let denom = BigInt::one() << (n - 1);
                Rational::from_parts(BigInt::one(), denom).expect("positive")
            })),
            halving: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn is_halving(&self) -> bool {
        self.halving
    }

    pub fn is_infinite(&self) -> bool {
        self.extension.is_some()
    }

    pub fn generator(&self, n: usize) -> Option<Rational> {
        if n == 0 {
            return None;
        }
        if let Some(q) = self.prefix.get(n - 1) {
            return Some(q.clone());
        }
        self.extension.as_ref().map(|rule| rule(n))
    }
}

impl PartialEq for CustomFamily {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.prefix == other.prefix
            && self.halving == other.halving
            && self.extension.is_some() == other.extension.is_some()
    }
}

impl fmt::Debug for CustomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFamily")
            .field("name", &self.name)
            .field("prefix", &self.prefix)
            .field("halving", &self.halving)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilyRule {
    /// `a_n = 1 / (2^n p_n)` over the odd primes.
    Grams,
    /// `a_n = (p_n + 1) / p_n^2` over all primes.
    PrimesSquared,
    Custom(CustomFamily),
}

impl FamilyRule {
    /// The `n`-th generator (1-based), or `None` past the end of a finite custom family.
    pub fn generator(&self, n: usize) -> Result<Option<Rational>> {
        if n == 0 {
            return arg("generator index must be at least 1");
        }
        Ok(match self {
            FamilyRule::Grams => {
                let p = nth_prime(PrimeKind::OddPrimes, n)?;
                let denom = (BigInt::one() << n) * BigInt::from(p);
                Some(Rational::from_parts(BigInt::one(), denom)?)
            }
            FamilyRule::PrimesSquared => {
                let p = nth_prime(PrimeKind::AllPrimes, n)?;
                Some(Rational::from_parts(
                    BigInt::from(p + 1),
                    BigInt::from(p) * BigInt::from(p),
                )?)
            }
            FamilyRule::Custom(c) => c.generator(n),
        })
    }

    /// Generators `1..=len` (fewer for a finite custom family).
    pub fn window(&self, len: usize) -> Result<Vec<(usize, Rational)>> {
        let mut out = Vec::with_capacity(len);
        for n in 1..=len {
            match self.generator(n)? {
                Some(q) => out.push((n, q)),
                None => break,
            }
        }
        if let FamilyRule::Custom(c) = self {
            if c.halving {
                for w in out.windows(2) {
                    if w[1].1.mul_int(2) != w[0].1 {
                        return arg(format!(
                            "family {:?} is declared halving but a_{} != 2 a_{}",
                            c.name,
                            w[0].0,
                            w[1].0
                        ));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A presented submonoid of `Q>=0` or of `Z x Z`.
#[derive(Debug, Clone, PartialEq)]
pub enum MonoidPresentation {
    /// The monoid generated by finitely many positive rationals (possibly none).
    FgPuiseux { generators: Vec<Rational> },
    /// The monoid generated by an infinite (lazily materialized) family.
    Family(FamilyRule),
    /// `base ∪ Q>=theta`.
    ThresholdUnion {
        base: Box<MonoidPresentation>,
        theta: Rational,
    },
    /// `(N0 x N0) ∪ (Z x N>=2)`.
    QuadrantUnion,
}

impl MonoidPresentation {
    /// Sorts the generators ascending; rejects zero and repeated generators.
    pub fn fg_puiseux(mut generators: Vec<Rational>) -> Result<Self> {
        if generators.iter().any(Rational::is_zero) {
            return arg("generators must be positive");
        }
        generators.sort();
        if generators.windows(2).any(|w| w[0] == w[1]) {
            return arg("generators must be pairwise distinct");
        }
        Ok(MonoidPresentation::FgPuiseux { generators })
    }

    /// The trivial monoid `{0}`.
    pub fn trivial() -> Self {
        MonoidPresentation::FgPuiseux {
            generators: Vec::new(),
        }
    }

    pub fn grams() -> Self {
        MonoidPresentation::Family(FamilyRule::Grams)
    }

    pub fn primes_squared() -> Self {
        MonoidPresentation::Family(FamilyRule::PrimesSquared)
    }

    pub fn dyadic() -> Self {
        MonoidPresentation::Family(FamilyRule::Custom(CustomFamily::dyadic()))
    }

    pub fn threshold_union(base: MonoidPresentation, theta: Rational) -> Result<Self> {
        if theta.is_zero() {
            return arg("threshold must be positive");
        }
        if base.is_pair_kind() {
            return arg("threshold union needs a Puiseux-style base");
        }
        Ok(MonoidPresentation::ThresholdUnion {
            base: Box::new(base),
            theta,
        })
    }

    pub fn is_pair_kind(&self) -> bool {
        matches!(self, MonoidPresentation::QuadrantUnion)
    }

    /// Checks that `q` has the element kind this presentation works with.
    pub fn check_kind(&self, q: &Element) -> Result<()> {
        match (self.is_pair_kind(), q) {
            (true, Element::Pair(..)) | (false, Element::Rat(_)) => Ok(()),
            _ => arg(format!("element {q} has the wrong kind for this monoid")),
        }
    }

    pub fn identity(&self) -> Element {
        if self.is_pair_kind() {
            Element::Pair(0, 0)
        } else {
            Element::Rat(Rational::zero())
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("presentation serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonoidPresentation::FgPuiseux { generators } => {
                let gens: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
                write!(f, "<{}>", gens.join(", "))
            }
            MonoidPresentation::Family(FamilyRule::Grams) => f.write_str("<1/(2^n p_n)>"),
            MonoidPresentation::Family(FamilyRule::PrimesSquared) => {
                f.write_str("<(p_n+1)/p_n^2>")
            }
            MonoidPresentation::Family(FamilyRule::Custom(c)) => write!(f, "<{}>", c.name),
            MonoidPresentation::ThresholdUnion { base, theta } => {
                write!(f, "{base} ∪ Q>={theta}")
            }
            MonoidPresentation::QuadrantUnion => f.write_str("(N0xN0) ∪ (ZxN>=2)"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
enum PresentationJson {
    FgPuiseux {
        generators: Vec<Rational>,
    },
    Family {
        rule: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prefix: Option<Vec<Rational>>,
    },
    ThresholdUnion {
        base: Box<PresentationJson>,
        theta: Rational,
    },
    QuadrantUnion,
}

impl From<&MonoidPresentation> for PresentationJson {
    fn from(m: &MonoidPresentation) -> Self {
        let family = |rule: &str| PresentationJson::Family {
            rule: rule.into(),
            name: None,
            prefix: None,
        };
        match m {
            MonoidPresentation::FgPuiseux { generators } => PresentationJson::FgPuiseux {
                generators: generators.clone(),
            },
            MonoidPresentation::Family(FamilyRule::Grams) => family("grams"),
            MonoidPresentation::Family(FamilyRule::PrimesSquared) => family("primes-squared"),
            MonoidPresentation::Family(FamilyRule::Custom(c)) if *c == CustomFamily::dyadic() => {
                family("dyadic")
            }
            MonoidPresentation::Family(FamilyRule::Custom(c)) => PresentationJson::Family {
                rule: "custom".into(),
                name: Some(c.name.clone()),
                prefix: Some(c.prefix.clone()),
            },
            MonoidPresentation::ThresholdUnion { base, theta } => {
                PresentationJson::ThresholdUnion {
                    base: Box::new(base.as_ref().into()),
                    theta: theta.clone(),
                }
            }
            MonoidPresentation::QuadrantUnion => PresentationJson::QuadrantUnion,
        }
    }
}

impl TryFrom<PresentationJson> for MonoidPresentation {
    type Error = Error;

    fn try_from(j: PresentationJson) -> Result<Self> {
        match j {
            PresentationJson::FgPuiseux { generators } => MonoidPresentation::fg_puiseux(generators),
            PresentationJson::Family { rule, name, prefix } => {
                let rule = match rule.as_str() {
                    "grams" => FamilyRule::Grams,
                    "primes-squared" => FamilyRule::PrimesSquared,
                    "dyadic" => FamilyRule::Custom(CustomFamily::dyadic()),
                    "custom" => FamilyRule::Custom(CustomFamily::new(
                        name.unwrap_or_else(|| "custom".into()),
                        prefix.ok_or_else(|| {
                            Error::Parse("custom family needs a \"prefix\" list".into())
                        })?,
                    )?),
                    other => return Err(Error::Parse(format!("unknown family rule {other:?}"))),
                };
                Ok(MonoidPresentation::Family(rule))
            }
            PresentationJson::ThresholdUnion { base, theta } => {
                MonoidPresentation::threshold_union((*base).try_into()?, theta)
            }
            PresentationJson::QuadrantUnion => Ok(MonoidPresentation::QuadrantUnion),
        }
    }
}

impl Serialize for MonoidPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PresentationJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonoidPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PresentationJson::deserialize(d)?
            .try_into()
            .map_err(serde::de::Error::custom)
    }
}

/// Work limits for operations on infinite objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// How many family generators to materialize.
    pub truncation_index: usize,
    /// How many witnesses to collect before stopping.
    pub witness_limit: usize,
    /// Maximum number of search nodes per enumeration.
    pub enumeration_cap: u64,
}

impl Budget {
    pub fn new(truncation_index: usize, witness_limit: usize, enumeration_cap: u64) -> Result<Self> {
        if truncation_index == 0 || witness_limit == 0 || enumeration_cap == 0 {
            return arg("budget fields must be at least 1");
        }
        Ok(Budget {
            truncation_index,
            witness_limit,
            enumeration_cap,
        })
    }

    pub fn with_truncation(self, truncation_index: usize) -> Self {
        Budget {
            truncation_index: truncation_index.max(1),
            ..self
        }
    }

    pub fn with_limit(self, witness_limit: usize) -> Self {
        Budget {
            witness_limit: witness_limit.max(1),
            ..self
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            truncation_index: 8,
            witness_limit: 5,
            enumeration_cap: 1_000_000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_text_roundtrip() {
        for s in ["3/4", "0", "(-3,2)", "(0,0)"] {
            let e: Element = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert!("(1,)".parse::<Element>().is_err());
    }

    #[test]
    fn json_schema_examples() {
        let cases = [
            r#"{"kind":"fg-puiseux","generators":["3/4","5/6"]}"#,
            r#"{"kind":"family","rule":"grams"}"#,
            r#"{"kind":"family","rule":"primes-squared"}"#,
            r#"{"kind":"threshold-union","base":{"kind":"family","rule":"primes-squared"},"theta":"1"}"#,
            r#"{"kind":"quadrant-union"}"#,
            r#"{"kind":"family","rule":"dyadic"}"#,
        ];
        for c in cases {
            let m: MonoidPresentation = serde_json::from_str(c).unwrap();
            assert_eq!(serde_json::to_string(&m).unwrap(), c);
        }
    }

    #[test]
    fn json_rejects_bad_presentations() {
        for c in [
            r#"{"kind":"fg-puiseux","generators":["0"]}"#,
            r#"{"kind":"fg-puiseux","generators":["1","1"]}"#,
            r#"{"kind":"family","rule":"fibonacci"}"#,
            r#"{"kind":"threshold-union","base":{"kind":"quadrant-union"},"theta":"1"}"#,
            r#"{"kind":"threshold-union","base":{"kind":"quadrant-union"},"theta":"0"}"#,
            r#"{"kind":"nope"}"#,
        ] {
            assert!(serde_json::from_str::<MonoidPresentation>(c).is_err(), "{c}");
        }
    }

    #[test]
    fn family_generators() {
        let g = FamilyRule::Grams;
        let w: Vec<String> = g.window(4).unwrap().iter().map(|(_, q)| q.to_string()).collect();
        assert_eq!(w, ["1/6", "1/20", "1/56", "1/176"]);
        let ps = FamilyRule::PrimesSquared;
        let w: Vec<String> = ps.window(3).unwrap().iter().map(|(_, q)| q.to_string()).collect();
        assert_eq!(w, ["3/4", "4/9", "6/25"]);
        let d = FamilyRule::Custom(CustomFamily::dyadic());
        assert_eq!(d.generator(3).unwrap().unwrap(), Rational::new(1, 4));
    }

    #[test]
    fn budget_rejects_zero() {
        assert!(Budget::new(0, 1, 1).is_err());
        assert_eq!(Budget::default().enumeration_cap, 1_000_000);
    }
}
