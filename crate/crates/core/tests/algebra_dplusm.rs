use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use uff_core::algebra::{is_primitive, ma_content, ma_mul, AlgebraElement, CoefficientField};
use uff_core::dplusm::{associate_in_r, CosetSpace, FiniteField, SeriesElement};
use uff_core::*;

fn integer_element(terms: &[(u64, i64)]) -> AlgebraElement {
    let m = MonoidPresentation::dyadic();
    let terms = terms
        .iter()
        .map(|&(k, c)| (Rational::new(k, 4), BigRational::from_integer(BigInt::from(c))));
    AlgebraElement::new(CoefficientField::Q, m, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn content_scales(terms in proptest::collection::vec((0u64..16, -30i64..30), 1..5), c in 1i64..12) {
        let f = integer_element(&terms);
        prop_assume!(!f.is_zero());
        let scaled = f.scale(&BigRational::from_integer(BigInt::from(c))).unwrap();
        prop_assert_eq!(ma_content(&scaled).unwrap(), ma_content(&f).unwrap() * BigInt::from(c));
    }

    #[test]
    fn primitive_times_primitive_is_primitive(
        f in proptest::collection::vec((0u64..12, -6i64..6), 1..4),
        g in proptest::collection::vec((0u64..12, -6i64..6), 1..4),
    ) {
        let (f, g) = (integer_element(&f), integer_element(&g));
        prop_assume!(!f.is_zero() && !g.is_zero());
        prop_assume!(is_primitive(&f).unwrap() && is_primitive(&g).unwrap());
        prop_assert!(is_primitive(&ma_mul(&f, &g).unwrap()).unwrap());
    }
}

#[test]
fn fp_coefficients_are_reduced() {
    let m = MonoidPresentation::dyadic();
    let f7 = CoefficientField::fp(7).unwrap();
    let f = AlgebraElement::parse(f7, m.clone(), "8*x^(1/2) + 7*x").unwrap();
    assert_eq!(f, AlgebraElement::parse(f7, m.clone(), "x^(1/2)").unwrap());
    let half = AlgebraElement::parse(f7, m, "1/2").unwrap();
    assert_eq!(half.coefficient(&Rational::zero()), BigRational::from_integer(BigInt::from(4)));
    assert!(CoefficientField::fp(9).is_err());
}

#[test]
fn cosets_partition_the_units() {
    for (p, m, d) in [(2, 2, 1), (3, 2, 1), (2, 4, 2), (5, 2, 1)] {
        let k = FiniteField::new(p, m).unwrap();
        let space = CosetSpace::new(&k, d).unwrap();
        let reps = space.transversal();
        let mut seen = BTreeSet::new();
        for r in &reps {
            let class: Vec<_> = k.units().filter(|u| space.same_coset(u, r).unwrap()).collect();
            assert_eq!(class.len() as u64, p.pow(d as u32) - 1, "GF({p}^{m}) over GF({p}^{d})");
            for u in class {
                assert!(seen.insert(k.index(&u)), "cosets overlap");
            }
        }
        assert_eq!(seen.len() as u64, k.size() - 1);
    }
}

#[test]
fn associate_classes_of_linear_series_over_f9() {
    // a t with a in F9^x: associated exactly when a / b lies in F3^x
    let k = FiniteField::new(3, 2).unwrap();
    let space = CosetSpace::new(&k, 1).unwrap();
    let units: Vec<_> = k.units().collect();
    for a in &units {
        for c in &units {
            let x = SeriesElement::monomial(&k, a.clone(), 1, 6).unwrap();
            let y = SeriesElement::monomial(&k, c.clone(), 1, 6).unwrap();
            let v = associate_in_r(&x, &y, 1).unwrap().verdict;
            assert_eq!(v.is_yes(), space.same_coset(a, c).unwrap());
        }
    }
}
