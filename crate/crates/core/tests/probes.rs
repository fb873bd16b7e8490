use uff_core::*;

fn e(s: &str) -> Element {
    s.parse().unwrap()
}

fn fg(gens: &[u64]) -> MonoidPresentation {
    MonoidPresentation::fg_puiseux(gens.iter().map(|&g| Rational::integer(g)).collect()).unwrap()
}

fn ray(base: MonoidPresentation) -> MonoidPresentation {
    MonoidPresentation::threshold_union(base, Rational::one()).unwrap()
}

#[test]
fn grams_lengths_refute_bf() {
    let b = Budget::default().with_truncation(3).with_limit(3);
    let r = probe(&MonoidPresentation::grams(), Property::Bf, &[e("1")], b).unwrap();
    assert_eq!(r.verdict, Verdict::No);
    match &r.witnesses[0] {
        Witness::Lengths { element, lengths, .. } => {
            assert_eq!(element, &e("1"));
            assert_eq!(lengths, &[6, 20, 56]);
        }
        w => panic!("unexpected witness {w:?}"),
    }
}

#[test]
fn grams_factorization_family_refutes_ff() {
    let b = Budget::default().with_truncation(4).with_limit(4);
    let r = probe(&MonoidPresentation::grams(), Property::Ff, &[e("1")], b).unwrap();
    assert_eq!(r.verdict, Verdict::No);
    let Witness::Factorizations { factorizations, .. } = &r.witnesses[0] else { panic!() };
    assert_eq!(factorizations.len(), 4);
    for z in factorizations {
        let total: Rational = z.parts().map(|(a, m)| a.as_rational().unwrap().mul_int(m)).sum();
        assert_eq!(total, Rational::one());
    }
}

#[test]
fn finitely_generated_is_ff() {
    let r = probe(&fg(&[2, 3]), Property::Ff, &[], Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    assert_eq!(r.scope, Scope::Global);
}

#[test]
fn dyadic_is_antimatter() {
    let r = probe(&MonoidPresentation::dyadic(), Property::Antimatter, &[], Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    assert!(r.witnesses.iter().any(|w| matches!(w, Witness::HalvingSplit { .. })));
    let r = probe(&MonoidPresentation::dyadic(), Property::Atomic, &[], Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::No);
}

#[test]
fn primes_squared_ray_is_uff_on_a_sample() {
    let m = ray(MonoidPresentation::primes_squared());
    let r = probe(&m, Property::Uff, &[e("2"), e("43/36")], Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Yes);
    assert_eq!(r.scope, Scope::Sample);
    let r = probe(&m, Property::Idf, &[], Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::No);
}

#[test]
fn primes_squared_ray_is_not_atomic() {
    // 5/4 - a_n >= 1 for n >= 2 and 5/4 - 3/4 = 1/2 is not a member
    let m = ray(MonoidPresentation::primes_squared());
    let r = probe(&m, Property::Atomic, &[e("5/4")], Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::No);
    assert!(factorizations(&m, &e("5/4"), Budget::default()).unwrap().items.is_empty());
}

#[test]
fn zero_ray_is_bf_but_not_idf() {
    let m = ray(MonoidPresentation::trivial());
    let b = Budget::default();
    assert_eq!(probe(&m, Property::Bf, &[], b).unwrap().verdict, Verdict::Yes);
    assert_eq!(probe(&m, Property::Idf, &[], b).unwrap().verdict, Verdict::No);
    assert_eq!(probe(&m, Property::McdFinite, &[], b).unwrap().verdict, Verdict::No);
}

#[test]
fn quadrant_union_is_idf_but_not_atomic() {
    let m = MonoidPresentation::QuadrantUnion;
    let b = Budget::default();
    assert_eq!(probe(&m, Property::Idf, &[], b).unwrap().verdict, Verdict::Yes);
    assert_eq!(probe(&m, Property::Atomic, &[], b).unwrap().verdict, Verdict::No);
    assert_eq!(probe(&m, Property::Uff, &[], b).unwrap().verdict, Verdict::Yes);
}

#[test]
fn grams_mcd_finiteness_is_not_certified() {
    let r = probe(&MonoidPresentation::grams(), Property::McdFinite, &[], Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::UnknownAtBudget);
}

#[test]
fn non_member_sample_is_a_domain_error() {
    let r = probe(&fg(&[2, 3]), Property::Atomic, &[e("1")], Budget::default());
    assert!(matches!(r, Err(Error::Domain(_))));
}

#[test]
fn property_names_round_trip() {
    for p in Property::ALL {
        assert_eq!(p.to_string().parse::<Property>().unwrap(), p);
    }
    assert_eq!("mcd-finite".parse::<Property>().unwrap(), Property::McdFinite);
    assert!("ufd".parse::<Property>().is_err());
}
