use serde_json::json;
use uff_core::*;

fn pres(v: serde_json::Value) -> MonoidPresentation {
    MonoidPresentation::from_json(&v).unwrap()
}

fn e(s: &str) -> Element {
    s.parse().unwrap()
}

fn es(v: &[&str]) -> Vec<Element> {
    v.iter().map(|s| e(s)).collect()
}

fn fg(gens: &[&str]) -> MonoidPresentation {
    pres(json!({"kind": "fg-puiseux", "generators": gens}))
}

fn zero_ray() -> MonoidPresentation {
    MonoidPresentation::threshold_union(MonoidPresentation::trivial(), Rational::one()).unwrap()
}

fn ps_ray() -> MonoidPresentation {
    MonoidPresentation::threshold_union(MonoidPresentation::primes_squared(), Rational::one()).unwrap()
}

fn b() -> Budget {
    Budget::default()
}

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

#[test]
fn membership_examples() {
    let r = is_member(&fg(&["3/4", "5/6"]), &e("19/12"), b()).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    match &r.witnesses[0] {
        Witness::Representation { combination, .. } => {
            assert_eq!(combination.multiplicity(&e("3/4")), 1);
            assert_eq!(combination.multiplicity(&e("5/6")), 1);
        }
        w => panic!("unexpected witness {w:?}"),
    }
    for m in [fg(&["2", "3"]), MonoidPresentation::grams(), zero_ray(), MonoidPresentation::dyadic()] {
        assert!(is_member(&m, &e("0"), b()).unwrap().verdict.is_yes());
    }
    assert!(is_member(&ps_ray(), &e("2"), b()).unwrap().verdict.is_yes());
    let q = MonoidPresentation::QuadrantUnion;
    assert!(is_member(&q, &e("(-3,1)"), b()).unwrap().verdict.is_no());
    assert!(is_member(&q, &e("(-3,2)"), b()).unwrap().verdict.is_yes());
}

#[test]
fn wrong_kind_is_an_argument_error() {
    let err = is_member(&MonoidPresentation::QuadrantUnion, &e("1/2"), b()).unwrap_err();
    assert!(matches!(err, Error::InvalidArgument(_)));
    let err = is_member(&fg(&["2"]), &e("(1,1)"), b()).unwrap_err();
    assert!(matches!(err, Error::InvalidArgument(_)));
}

#[test]
fn divisibility_examples() {
    for n in 1..=10usize {
        let a = FamilyRule::PrimesSquared.generator(n).unwrap().unwrap();
        assert!(divides(&ps_ray(), &Element::Rat(a), &e("2"), b()).unwrap().verdict.is_yes());
    }
    assert!(divides(&fg(&["2", "3"]), &e("5"), &e("5"), b()).unwrap().verdict.is_yes());
    assert!(divides(&fg(&["2", "3"]), &e("2"), &e("3"), b()).unwrap().verdict.is_no());
    assert!(divides(&fg(&["2", "3"]), &e("4"), &e("3"), b()).unwrap().verdict.is_no());
}

#[test]
fn divisor_examples() {
    let d = divisors(&fg(&["2", "3"]), &e("6"), b()).unwrap();
    assert!(d.exact);
    assert_eq!(strs(&d.items), ["0", "2", "3", "4", "6"]);
    let d = divisors(&zero_ray(), &e("0"), b()).unwrap();
    assert_eq!(strs(&d.items), ["0"]);
    let d = divisors(&zero_ray(), &e("3"), b()).unwrap();
    assert!(!d.exact);
    assert!(d.items.contains(&e("3/2")) && d.items.contains(&e("7/4")));
    assert!(matches!(divisors(&fg(&["2", "3"]), &e("1"), b()), Err(Error::Domain(_))));
}

#[test]
fn atom_examples() {
    assert!(is_atom(&zero_ray(), &e("3/2"), b()).unwrap().verdict.is_yes());
    assert!(is_atom(&zero_ray(), &e("5/2"), b()).unwrap().verdict.is_no());
    assert!(is_atom(&MonoidPresentation::grams(), &e("1/6"), b()).unwrap().verdict.is_yes());
    let q = MonoidPresentation::QuadrantUnion;
    assert!(is_atom(&q, &e("(1,0)"), b()).unwrap().verdict.is_yes());
    let r = is_atom(&q, &e("(-1,2)"), b()).unwrap();
    assert!(r.verdict.is_no());
    assert_eq!(
        r.witnesses[0],
        Witness::Decomposition {
            element: e("(-1,2)"),
            left: e("(1,0)"),
            right: e("(-2,2)"),
        }
    );
    assert!(matches!(is_atom(&zero_ray(), &e("0"), b()), Err(Error::InvalidArgument(_))));
    assert!(matches!(is_atom(&zero_ray(), &e("1/2"), b()), Err(Error::Domain(_))));
}

#[test]
fn one_is_an_atom_of_the_primes_squared_ray() {
    assert!(is_atom(&ps_ray(), &e("1"), b()).unwrap().verdict.is_yes());
    assert!(is_atom(&ps_ray(), &e("3/4"), b()).unwrap().verdict.is_yes());
    assert!(is_atom(&ps_ray(), &e("5/4"), b()).unwrap().verdict.is_no());
}

#[test]
fn atoms_up_to_examples() {
    let a = atoms_up_to(&fg(&["2", "3", "4"]), None, b()).unwrap();
    assert!(a.exact);
    assert_eq!(strs(&a.items), ["2", "3"]);
    let a = atoms_up_to(&MonoidPresentation::QuadrantUnion, None, b()).unwrap();
    assert!(a.exact);
    assert_eq!(strs(&a.items), ["(0,1)", "(1,0)"]);
    let a = atoms_up_to(&MonoidPresentation::grams(), None, b().with_truncation(4)).unwrap();
    assert!(a.exact);
    assert_eq!(strs(&a.items), ["1/176", "1/56", "1/20", "1/6"]);
    let a = atoms_up_to(&MonoidPresentation::dyadic(), None, b()).unwrap();
    assert!(a.exact && a.items.is_empty());
    let a = atoms_up_to(&zero_ray(), None, b().with_truncation(2)).unwrap();
    assert!(!a.exact);
    assert_eq!(strs(&a.items), ["1", "5/4", "3/2", "7/4"]);
}

#[test]
fn factorization_examples() {
    let z = factorizations(&fg(&["2", "3"]), &e("6"), b()).unwrap();
    assert!(z.exact);
    assert_eq!(strs(&z.items), ["{2:3}", "{3:2}"]);
    let z = factorizations(&MonoidPresentation::primes_squared(), &e("3/4"), b()).unwrap();
    assert!(z.exact);
    assert_eq!(strs(&z.items), ["{3/4:1}"]);
    let z = factorizations(&MonoidPresentation::grams(), &e("1"), b().with_truncation(2)).unwrap();
    assert!(!z.exact);
    let s = strs(&z.items);
    assert!(s.contains(&"{1/6:6}".to_string()) && s.contains(&"{1/20:20}".to_string()));
    let z = factorizations(&MonoidPresentation::QuadrantUnion, &e("(-1,2)"), b()).unwrap();
    assert!(z.exact && z.items.is_empty());
    let z = factorizations(&fg(&["2", "3"]), &e("0"), b()).unwrap();
    assert_eq!(z.items, vec![Factorization::new()]);
}

#[test]
fn length_set_examples() {
    let l = length_set(&fg(&["2", "3"]), &e("6"), b()).unwrap();
    assert!(l.exact);
    assert_eq!(l.items, [2, 3]);
    let l = length_set(&fg(&["2", "3"]), &e("3"), b()).unwrap();
    assert_eq!(l.items, [1]);
    let l = length_set(&MonoidPresentation::grams(), &e("1"), b().with_truncation(3)).unwrap();
    for n in [6, 20, 56] {
        assert!(l.items.contains(&n));
    }
    let l = length_set(&fg(&["2", "3"]), &e("0"), b()).unwrap();
    assert!(l.exact && l.items.is_empty());
}

#[test]
fn atom_divisor_examples() {
    let d = atom_divisors(&ps_ray(), &e("2"), b().with_limit(3)).unwrap();
    assert!(!d.exact);
    assert_eq!(strs(&d.items), ["6/25", "4/9", "3/4"]);
    let d = atom_divisors(&fg(&["2", "3"]), &e("7"), b()).unwrap();
    assert!(d.exact);
    assert_eq!(strs(&d.items), ["2", "3"]);
    let d = atom_divisors(&zero_ray(), &e("0"), b()).unwrap();
    assert!(d.exact && d.items.is_empty());
}

#[test]
fn common_divisor_examples() {
    let c = common_divisors(&fg(&["2", "3"]), &es(&["2", "3"]), b()).unwrap();
    assert!(c.exact);
    assert_eq!(strs(&c.items), ["0"]);
    let single = common_divisors(&fg(&["2", "3"]), &es(&["6"]), b()).unwrap();
    assert_eq!(single, divisors(&fg(&["2", "3"]), &e("6"), b()).unwrap());
    let c = common_divisors(&zero_ray(), &es(&["3", "4"]), b()).unwrap();
    assert!(!c.exact);
    for d in ["1", "5/4", "3/2", "7/4", "2"] {
        assert!(c.items.contains(&e(d)), "{d}");
    }
    assert!(matches!(common_divisors(&zero_ray(), &[], b()), Err(Error::InvalidArgument(_))));
}

#[test]
fn mcd_examples() {
    let m = mcds(&fg(&["2", "3"]), &es(&["2", "3"]), b()).unwrap();
    assert!(m.exact);
    assert_eq!(strs(&m.items), ["0"]);
    let m = mcds(&fg(&["2", "3"]), &es(&["6"]), b()).unwrap();
    assert_eq!(strs(&m.items), ["6"]);
    // {3, 7/2}: every d in (1, 2] is maximal
    let m = mcds(&zero_ray(), &es(&["3", "7/2"]), b()).unwrap();
    assert!(!m.exact);
    assert_eq!(m.items.len(), 5);
    assert!(m.items.iter().all(|d| d > &e("1") && d <= &e("2")));
}

#[test]
fn mcds_of_three_and_four_in_the_zero_ray() {
    // d = 3 is the only maximal common divisor: for d in [1, 2] the element 3 - d
    // still divides both 3 - d and 4 - d
    let m = mcds(&zero_ray(), &es(&["3", "4"]), b()).unwrap();
    assert_eq!(strs(&m.items), ["3"]);
}

#[test]
fn quadrant_divisors() {
    let q = MonoidPresentation::QuadrantUnion;
    let d = divisors(&q, &e("(2,1)"), b()).unwrap();
    assert!(d.exact);
    assert_eq!(d.items.len(), 6);
    let d = divisors(&q, &e("(0,4)"), b()).unwrap();
    assert!(!d.exact);
    assert!(d.items.contains(&e("(-3,2)")));
    let m = mcds(&q, &es(&["(1,0)", "(0,1)"]), b()).unwrap();
    assert!(m.exact);
    assert_eq!(strs(&m.items), ["(0,0)"]);
}
