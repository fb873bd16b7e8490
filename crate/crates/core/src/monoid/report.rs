use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use super::presentation::{Budget, Element};
use crate::numtheory::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Yes,
    No,
    UnknownAtBudget,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn is_no(self) -> bool {
        self == Verdict::No
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::UnknownAtBudget => "unknown-at-budget",
        })
    }
}

/// A multiset of atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factorization(BTreeMap<Element, u64>);

impl Factorization {
    pub fn new() -> Self {
        Factorization(BTreeMap::new())
    }

    pub fn single(atom: Element) -> Self {
        let mut z = Factorization::new();
        z.add(atom, 1);
        z
    }

    pub fn add(&mut self, atom: Element, mult: u64) {
        if mult > 0 {
            *self.0.entry(atom).or_insert(0) += mult;
        }
    }

    pub fn merged(&self, other: &Factorization) -> Factorization {
        let mut z = self.clone();
        for (a, m) in &other.0 {
            z.add(a.clone(), *m);
        }
        z
    }

    pub fn len(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Element, u64)> {
        self.0.iter().map(|(a, m)| (a, *m))
    }

    pub fn multiplicity(&self, atom: &Element) -> u64 {
        self.0.get(atom).copied().unwrap_or(0)
    }

    /// The weighted sum of the atoms, or `None` when atoms of different kinds are mixed.
    pub fn value(&self) -> Option<Element> {
        let mut rat = Rational::zero();
        let mut pair = (0i64, 0i64);
        let mut kinds = (false, false);
        for (a, m) in &self.0 {
            match a {
                Element::Rat(q) => {
                    kinds.0 = true;
                    rat = rat + q.mul_int(*m);
                }
                Element::Pair(x, y) => {
                    kinds.1 = true;
                    let m = i64::try_from(*m).ok()?;
                    pair.0 = pair.0.checked_add(x.checked_mul(m)?)?;
                    pair.1 = pair.1.checked_add(y.checked_mul(m)?)?;
                }
            }
        }
        match kinds {
            (true, true) => None,
            (false, true) => Some(Element::Pair(pair.0, pair.1)),
            _ => Some(Element::Rat(rat)),
        }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, m)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}:{m}")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize)]
struct Part<'a> {
    atom: &'a Element,
    mult: u64,
}

impl Serialize for Factorization {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (atom, &mult) in &self.0 {
            seq.serialize_element(&Part { atom, mult })?;
        }
        seq.end()
    }
}

/// A list answer together with a statement of its completeness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Listing<T> {
    pub items: Vec<T>,
    /// The list is provably the complete answer.
    pub exact: bool,
    /// The enumeration cap stopped the search early.
    pub cap_hit: bool,
    /// Candidates the engine could neither confirm nor reject at this budget.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub undecided: Vec<T>,
}

impl<T> Listing<T> {
    pub fn exact(items: Vec<T>) -> Self {
        Listing {
            items,
            exact: true,
            cap_hit: false,
            undecided: Vec::new(),
        }
    }

    pub fn partial(items: Vec<T>) -> Self {
        Listing {
            items,
            exact: false,
            cap_hit: false,
            undecided: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Evidence attached to a [`ProbeReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// A nonnegative integer combination of generators or atoms summing to `element`.
    Representation {
        element: Element,
        combination: Factorization,
    },
    /// `element = left + right` with both parts nonzero members.
    Decomposition {
        element: Element,
        left: Element,
        right: Element,
    },
    Factorizations {
        element: Element,
        factorizations: Vec<Factorization>,
        exact: bool,
    },
    Lengths {
        element: Element,
        lengths: Vec<u64>,
        exact: bool,
    },
    AtomDivisors {
        element: Element,
        atoms: Vec<Element>,
        exact: bool,
    },
    Mcds {
        set: Vec<Element>,
        mcds: Vec<Element>,
        exact: bool,
    },
    Atoms {
        atoms: Vec<Element>,
        exact: bool,
    },
    /// `element = half + half` with `half` a nonzero member.
    HalvingSplit { element: Element, half: Element },
    Membership {
        element: Element,
        verdict: Verdict,
    },
    Note { text: String },
}

/// How much of the budget an operation consumed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BudgetUsed {
    pub truncation_index: usize,
    pub coefficient_bound: u64,
    pub enumeration_count: u64,
}

impl BudgetUsed {
    pub fn absorb(&mut self, other: BudgetUsed) {
        self.truncation_index = self.truncation_index.max(other.truncation_index);
        self.coefficient_bound = self.coefficient_bound.max(other.coefficient_bound);
        self.enumeration_count += other.enumeration_count;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// The verdict is about the whole monoid.
    Global,
    /// The verdict covers only the supplied sample.
    Sample,
}

/// A three-valued answer with evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub verdict: Verdict,
    pub scope: Scope,
    pub witnesses: Vec<Witness>,
    pub budget: Budget,
    pub budget_used: BudgetUsed,
}

impl ProbeReport {
    pub fn new(verdict: Verdict, budget: Budget) -> Self {
        ProbeReport {
            verdict,
            scope: Scope::Global,
            witnesses: Vec::new(),
            budget,
            budget_used: BudgetUsed::default(),
        }
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witnesses.push(w);
        self
    }

    pub fn with_used(mut self, used: BudgetUsed) -> Self {
        self.budget_used.absorb(used);
        self
    }

    pub fn with_scope(mut self, scope: Scope) -> Self {
        self.scope = scope;
        self
    }

    pub fn note(self, text: impl Into<String>) -> Self {
        self.with_witness(Witness::Note { text: text.into() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_value_and_length() {
        let mut z = Factorization::new();
        z.add(Element::int(2), 3);
        z.add(Element::int(3), 0);
        assert_eq!(z.len(), 3);
        assert_eq!(z.value(), Some(Element::int(6)));
        assert_eq!(z.to_string(), "{2:3}");
        assert_eq!(
            serde_json::to_string(&z).unwrap(),
            r#"[{"atom":"2","mult":3}]"#
        );
    }

    #[test]
    fn empty_factorization_is_identity() {
        let z = Factorization::new();
        assert_eq!(z.len(), 0);
        assert_eq!(z.value(), Some(Element::int(0)));
    }

    #[test]
    fn pair_factorization_value() {
        let mut z = Factorization::new();
        z.add(Element::Pair(1, 0), 2);
        z.add(Element::Pair(0, 1), 5);
        assert_eq!(z.value(), Some(Element::Pair(2, 5)));
    }
}
