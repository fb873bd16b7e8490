//! `R = k + t K[[t]]` inside `T = K[[t]]` for finite fields `k ⊆ K`: unit
//! cosets `K^x / k^x`, associates in `R`, and twisted factorizations of `t^e`.

mod field;
mod quadratic;
mod series;

use std::collections::BTreeSet;

use serde::Serialize;

pub use field::{parse_field_spec, FieldElement, FiniteField, MAX_FIELD_SIZE};
pub use quadratic::{sqrt2_same_coset, sqrt2_twist_family, QuadraticElement};
pub use series::{parse_series, SeriesElement, DEFAULT_PRECISION};

use crate::error::{arg, Error, Result};
use crate::monoid::Verdict;

/// `K^x / k^x` for the subfield `k` of `K` with `p^d` elements.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    field: FiniteField,
    sub_degree: usize,
    small_units: Vec<FieldElement>,
}

impl CosetSpace {
    pub fn new(field: &FiniteField, sub_degree: usize) -> Result<Self> {
        field.check_subfield(sub_degree)?;
        let mut small_units = Vec::new();
        for u in field.units() {
            if field.in_subfield(&u, sub_degree)? {
                small_units.push(u);
            }
        }
        Ok(CosetSpace {
            field: field.clone(),
            sub_degree,
            small_units,
        })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn sub_degree(&self) -> usize {
        self.sub_degree
    }

    /// The element of `u k^x` with the smallest index.
    pub fn representative(&self, u: &FieldElement) -> Result<FieldElement> {
        if u.is_zero() {
            return arg("zero is not a unit");
        }
        Ok(self
            .small_units
            .iter()
            .map(|c| self.field.mul(u, c))
            .min_by_key(|x| self.field.index(x))
            .expect("k^x contains 1"))
    }

    pub fn same_coset(&self, u: &FieldElement, v: &FieldElement) -> Result<bool> {
        Ok(self.representative(u)? == self.representative(v)?)
    }

    /// One representative per coset, in index order.
    pub fn transversal(&self) -> Vec<FieldElement> {
        let reps: BTreeSet<u64> = self
            .field
            .units()
            .map(|u| self.field.index(&self.representative(&u).expect("unit")))
            .collect();
        reps.into_iter().map(|n| self.field.from_index(n)).collect()
    }
}

/// `(p^m - 1) / (p^d - 1)`, cross-checked against an enumeration of the cosets.
pub fn coset_count(field: &FiniteField, sub_degree: usize) -> Result<u64> {
    let space = CosetSpace::new(field, sub_degree)?;
    let p = field.characteristic();
    let formula = (field.size() - 1) / (p.pow(sub_degree as u32) - 1);
    let counted = space.transversal().len() as u64;
    if counted != formula {
        return Err(Error::Domain(format!(
            "coset enumeration found {counted} cosets but the order formula gives {formula}"
        )));
    }
    Ok(formula)
}

pub fn is_member_r(f: &SeriesElement, sub_degree: usize) -> Result<bool> {
    f.field().in_subfield(f.constant_term(), sub_degree)
}

pub fn is_unit_r(f: &SeriesElement, sub_degree: usize) -> Result<bool> {
    Ok(f.is_unit_t() && is_member_r(f, sub_degree)?)
}

/// Whether `a = u b` for a unit `u` of `R`, decided from the first `precision` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssociateVerdict {
    pub verdict: Verdict,
    pub precision: usize,
    /// `a / b` when the valuations agree.
    #[serde(serialize_with = "display_opt")]
    pub quotient: Option<SeriesElement>,
    pub note: String,
}

fn display_opt<S: serde::Serializer>(v: &Option<SeriesElement>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.collect_str(q),
        None => s.serialize_none(),
    }
}

pub fn associate_in_r(a: &SeriesElement, b: &SeriesElement, sub_degree: usize) -> Result<AssociateVerdict> {
    if b.is_zero() {
        return arg("b is zero at the working precision");
    }
    for (name, x) in [("a", a), ("b", b)] {
        if !is_member_r(x, sub_degree)? {
            return Err(Error::Domain(format!("{name} = {x} is not in R")));
        }
    }
    let precision = a.precision().min(b.precision());
    let (va, vb) = (a.valuation(), b.valuation());
    if va != vb {
        return Ok(AssociateVerdict {
            verdict: Verdict::No,
            precision,
            quotient: None,
            note: format!("t-adic valuations differ ({va:?} and {vb:?}) up to precision {precision}"),
        });
    }
    let u = a.div(b)?;
    let unit = is_unit_r(&u, sub_degree)?;
    Ok(AssociateVerdict {
        verdict: Verdict::from_bool(unit),
        precision,
        note: if unit {
            format!("a / b = {u} is a unit of R; equal up to precision {precision}")
        } else {
            format!("a / b = {u} has constant term outside k")
        },
        quotient: Some(u),
    })
}

/// For each `u`, the factorization `(u t)(u^-1 t) t ... t` of `t^e` (`e` factors).
pub fn twist_family(
    field: &FiniteField,
    exponent: usize,
    reps: &[FieldElement],
    precision: usize,
) -> Result<Vec<Vec<SeriesElement>>> {
    if exponent < 2 {
        return arg("the exponent must be at least 2");
    }
    let t = SeriesElement::t(field, precision)?;
    reps.iter()
        .map(|u| {
            let inv = field.inv(u)?;
            let mut factors = vec![t.scale(u), t.scale(&inv)];
            factors.extend(std::iter::repeat_n(t.clone(), exponent - 2));
            Ok(factors)
        })
        .collect()
}

pub fn product(factors: &[SeriesElement]) -> Result<SeriesElement> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| acc.mul(f))
}

/// Factor tuples agree position by position up to associates in `R`.
pub fn componentwise_associated(x: &[SeriesElement], y: &[SeriesElement], sub_degree: usize) -> Result<bool> {
    if x.len() != y.len() {
        return Ok(false);
    }
    for (a, b) in x.iter().zip(y) {
        if !associate_in_r(a, b, sub_degree)?.verdict.is_yes() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Factor tuples agree as multisets up to associates in `R`.
pub fn same_factorization(x: &[SeriesElement], y: &[SeriesElement], sub_degree: usize) -> Result<bool> {
    if x.len() != y.len() {
        return Ok(false);
    }
    let mut used = vec![false; y.len()];
    'outer: for a in x {
        for (j, b) in y.iter().enumerate() {
            if !used[j] && associate_in_r(a, b, sub_degree)?.verdict.is_yes() {
                used[j] = true;
                continue 'outer;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FiniteField {
        FiniteField::new(2, 2).unwrap()
    }

    #[test]
    fn coset_counts() {
        for (p, m, d, want) in [(2, 2, 1, 3), (3, 2, 1, 4), (2, 3, 1, 7), (2, 4, 2, 5), (3, 2, 2, 1)] {
            assert_eq!(coset_count(&FiniteField::new(p, m).unwrap(), d).unwrap(), want);
        }
        assert!(coset_count(&FiniteField::new(2, 3).unwrap(), 2).is_err());
    }

    #[test]
    fn associates_of_twisted_t() {
        let k = f4();
        let w = k.generator();
        let w2 = k.mul(&w, &w);
        let a = SeriesElement::monomial(&k, w.clone(), 1, 8).unwrap();
        let b = SeriesElement::monomial(&k, w2, 1, 8).unwrap();
        assert_eq!(associate_in_r(&a, &b, 1).unwrap().verdict, Verdict::No);
        assert_eq!(associate_in_r(&a, &a, 1).unwrap().verdict, Verdict::Yes);
        let t = SeriesElement::t(&k, 8).unwrap();
        assert_eq!(associate_in_r(&t, &t.scale(&k.one()), 1).unwrap().verdict, Verdict::Yes);
        let z = SeriesElement::zero(&k, 8).unwrap();
        assert!(associate_in_r(&t, &z, 1).is_err());
    }

    #[test]
    fn membership_in_r() {
        let k = f4();
        assert!(is_member_r(&parse_series(&k, "1 + [0,1]*t", 8).unwrap(), 1).unwrap());
        assert!(!is_member_r(&parse_series(&k, "[0,1] + t", 8).unwrap(), 1).unwrap());
        assert!(is_member_r(&SeriesElement::zero(&k, 8).unwrap(), 1).unwrap());
    }

    #[test]
    fn twists_of_t_squared() {
        let k = f4();
        let space = CosetSpace::new(&k, 1).unwrap();
        let reps = space.transversal();
        assert_eq!(reps.len(), 3);
        let fams = twist_family(&k, 2, &reps, 8).unwrap();
        let t2 = SeriesElement::monomial(&k, k.one(), 2, 8).unwrap();
        for f in &fams {
            assert_eq!(product(f).unwrap(), t2);
        }
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(componentwise_associated(&fams[i], &fams[j], 1).unwrap(), i == j);
            }
        }
        // (w t)(w^2 t) and (w^2 t)(w t) are one factorization
        assert!(same_factorization(&fams[1], &fams[2], 1).unwrap());
        let three = twist_family(&k, 3, &[k.generator()], 8).unwrap();
        assert_eq!(product(&three[0]).unwrap(), SeriesElement::monomial(&k, k.one(), 3, 8).unwrap());
        assert!(twist_family(&k, 1, &reps, 8).is_err());
    }
}
