//! Canned constructions with their expected behaviour as executable claims.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{antimatter_split, ma_mul, AlgebraElement, CoefficientField};
use crate::dplusm::{
    associate_in_r, componentwise_associated, coset_count, is_member_r, parse_series, product, sqrt2_same_coset,
    sqrt2_twist_family, CosetSpace, FiniteField, SeriesElement, DEFAULT_PRECISION,
};
use crate::error::{Error, Result};
use crate::monoid::*;
use crate::numtheory::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub id: String,
    pub title: String,
    pub presentation: String,
    pub passed: bool,
    pub claims: Vec<ClaimResult>,
}

impl fmt::Display for FixtureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({}): {}", self.id, self.title, if self.passed { "PASS" } else { "FAIL" })?;
        writeln!(f, "  on {}", self.presentation)?;
        for c in &self.claims {
            writeln!(f, "  [{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.claim, c.detail)?;
        }
        Ok(())
    }
}

type Check = fn() -> Result<(bool, String)>;

struct Fixture {
    id: &'static str,
    title: &'static str,
    presentation: fn() -> String,
    claims: &'static [(&'static str, Check)],
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        id: "antimatter-dyadic",
        title: "N0[1/2] has no atoms; its monoid algebra splits every element without constant term",
        presentation: || MonoidPresentation::dyadic().to_string(),
        claims: &[
            ("probe Antimatter is Yes", dyadic_antimatter),
            ("probe Atomic is No", dyadic_not_atomic),
            ("x^(3/2) + x^2 splits as x^(3/4) * (x^(3/4) + x^(5/4))", dyadic_split),
        ],
    },
    Fixture {
        id: "bf-not-idf",
        title: "{0} ∪ Q>=1 is BF but neither IDF nor MCD-finite",
        presentation: || zero_ray().to_string(),
        claims: &[
            ("sampled rationals in [1,2) are atoms", zero_ray_atoms),
            ("sampled rationals >= 2 are not atoms", zero_ray_non_atoms),
            ("{3, 7/2} has >= 5 distinct maximality-checked MCDs", zero_ray_mcds),
            ("3 is divided by >= 5 distinct atoms", zero_ray_atom_divisors),
            ("probe BF is Yes", zero_ray_bf),
        ],
    },
    Fixture {
        id: "dplusm-f4",
        title: "R = F2 + t F4[[t]]: three unit cosets give three twisted factorizations of t^2",
        presentation: || "F2 + t GF(2^2)[[t]]".into(),
        claims: &[
            ("|F4^x / F2^x| = 3 by enumeration", f4_cosets),
            ("w t and w^2 t are not associated in R", f4_not_associated),
            ("twists of t^2 by a full transversal multiply back and are pairwise non-associate", f4_twists),
            ("1 + w t is in R and w + t is not", f4_membership),
        ],
    },
    Fixture {
        id: "dplusm-sqrt2",
        title: "Q(sqrt 2)^x / Q^x is infinite: twists of t^2 in pairwise distinct cosets",
        presentation: || "Q + t Q(sqrt 2)[[t]]".into(),
        claims: &[("1 + j sqrt 2 for j < 8 lie in pairwise distinct cosets", sqrt2_twists)],
    },
    Fixture {
        id: "grams",
        title: "Grams' monoid: atoms are the generators; 1 has unboundedly long factorizations",
        presentation: || MonoidPresentation::grams().to_string(),
        claims: &[
            ("1/(2^n p_n) is an atom for n <= 10", grams_atoms),
            ("L(1) contains 6, 20, 56, 176, 416", grams_lengths),
            ("1 is divided by >= 5 distinct atoms", grams_atom_divisors),
            ("probe BF is No", grams_not_bf),
            ("MCD-finiteness is left to an external theorem; sampled MCD runs stay within budget", grams_mcds),
        ],
    },
    Fixture {
        id: "quadrant-union",
        title: "(N0 x N0) ∪ (Z x N>=2): two atoms, elements without factorizations",
        presentation: || MonoidPresentation::QuadrantUnion.to_string(),
        claims: &[
            ("the atoms are exactly (1,0) and (0,1)", quadrant_atoms),
            ("(-1,2) has no factorization", quadrant_no_factorization),
            ("probe IDF is Yes and probe Atomic is No", quadrant_probes),
        ],
    },
    Fixture {
        id: "uff-not-idf",
        title: "<(p+1)/p^2> ∪ Q>=1 is U-FF but not IDF",
        presentation: || ps_ray().to_string(),
        claims: &[
            ("a_n divides 2 for n <= 10", ps_ray_divides_two),
            ("2 is divided by >= 5 distinct atoms", ps_ray_atom_divisors),
            ("probe UFF on {2, 43/36} is Yes", ps_ray_uff),
            ("probe IDF is No", ps_ray_not_idf),
        ],
    },
];

pub fn list_fixtures() -> Vec<&'static str> {
    let mut ids: Vec<&'static str> = FIXTURES.iter().map(|f| f.id).collect();
    ids.sort_unstable();
    ids
}

pub fn run_fixture(id: &str) -> Result<FixtureReport> {
    let fixture = FIXTURES
        .iter()
        .find(|f| f.id == id)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown fixture {id:?}; known: {}", list_fixtures().join(", "))))?;
    let claims: Vec<ClaimResult> = fixture
        .claims
        .iter()
        .map(|(claim, check)| {
            let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
            ClaimResult {
                claim: claim.to_string(),
                passed,
                detail,
            }
        })
        .collect();
    Ok(FixtureReport {
        id: fixture.id.into(),
        title: fixture.title.into(),
        presentation: (fixture.presentation)(),
        passed: claims.iter().all(|c| c.passed),
        claims,
    })
}

// ---- helpers ---------------------------------------------------------------

fn e(s: &str) -> Element {
    s.parse().expect("fixture literal")
}

fn b() -> Budget {
    Budget::default()
}

fn zero_ray() -> MonoidPresentation {
    MonoidPresentation::threshold_union(MonoidPresentation::trivial(), Rational::one()).expect("valid")
}

fn ps_ray() -> MonoidPresentation {
    MonoidPresentation::threshold_union(MonoidPresentation::primes_squared(), Rational::one()).expect("valid")
}

fn verdict_is(r: &ProbeReport, want: Verdict) -> (bool, String) {
    (r.verdict == want, format!("verdict {}", r.verdict))
}

fn joined<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn f4() -> Result<FiniteField> {
    FiniteField::new(2, 2)
}

// ---- antimatter-dyadic -----------------------------------------------------

fn dyadic_antimatter() -> Result<(bool, String)> {
    Ok(verdict_is(&probe(&MonoidPresentation::dyadic(), Property::Antimatter, &[], b())?, Verdict::Yes))
}

fn dyadic_not_atomic() -> Result<(bool, String)> {
    Ok(verdict_is(&probe(&MonoidPresentation::dyadic(), Property::Atomic, &[], b())?, Verdict::No))
}

fn dyadic_split() -> Result<(bool, String)> {
    let m = MonoidPresentation::dyadic();
    let f = AlgebraElement::parse(CoefficientField::Q, m.clone(), "x^(3/2) + x^2")?;
    let (l, r) = antimatter_split(&f)?;
    let ok = l == AlgebraElement::parse(CoefficientField::Q, m.clone(), "x^(3/4)")?
        && r == AlgebraElement::parse(CoefficientField::Q, m, "x^(3/4) + x^(5/4)")?
        && ma_mul(&l, &r)? == f;
    Ok((ok, format!("({l}) * ({r})")))
}

// ---- bf-not-idf ------------------------------------------------------------

fn zero_ray_atoms() -> Result<(bool, String)> {
    let samples = ["1", "9/8", "5/4", "4/3", "3/2", "5/3", "7/4", "199/100"];
    let mut bad = Vec::new();
    for s in samples {
        if !is_atom(&zero_ray(), &e(s), b())?.verdict.is_yes() {
            bad.push(s);
        }
    }
    Ok((bad.is_empty(), format!("{} samples, failures: [{}]", samples.len(), bad.join(", "))))
}

fn zero_ray_non_atoms() -> Result<(bool, String)> {
    let samples = ["2", "5/2", "3", "7/2", "10", "201/100"];
    let mut bad = Vec::new();
    for s in samples {
        if !is_atom(&zero_ray(), &e(s), b())?.verdict.is_no() {
            bad.push(s);
        }
    }
    Ok((bad.is_empty(), format!("{} samples, failures: [{}]", samples.len(), bad.join(", "))))
}

/// `d` is a common divisor of `set` and the shifted set has no nonzero common divisor.
fn is_verified_mcd(m: &MonoidPresentation, set: &[Element], d: &Element) -> Result<bool> {
    let mut shifted = Vec::new();
    for s in set {
        if !divides(m, d, s, b())?.verdict.is_yes() {
            return Ok(false);
        }
        let (Some(s), Some(d)) = (s.as_rational(), d.as_rational()) else {
            return Ok(false);
        };
        shifted.push(Element::Rat(s.checked_sub(d).expect("d divides s")));
    }
    let cd = common_divisors(m, &shifted, b())?;
    Ok(cd.exact && cd.items.iter().all(Element::is_identity))
}

fn zero_ray_mcds() -> Result<(bool, String)> {
    let m = zero_ray();
    let set = vec![e("3"), e("7/2")];
    let out = mcds(&m, &set, b())?;
    let mut verified = BTreeSet::new();
    for d in &out.items {
        if is_verified_mcd(&m, &set, d)? {
            verified.insert(d.clone());
        }
    }
    Ok((verified.len() >= 5, format!("verified MCDs: {}", joined(&verified.into_iter().collect::<Vec<_>>()))))
}

fn zero_ray_atom_divisors() -> Result<(bool, String)> {
    let d = atom_divisors(&zero_ray(), &e("3"), b().with_limit(10))?;
    Ok((d.items.len() >= 5, format!("{} atoms: {}", d.items.len(), joined(&d.items))))
}

fn zero_ray_bf() -> Result<(bool, String)> {
    Ok(verdict_is(&probe(&zero_ray(), Property::Bf, &[], b())?, Verdict::Yes))
}

// ---- dplusm ----------------------------------------------------------------

fn f4_cosets() -> Result<(bool, String)> {
    let n = coset_count(&f4()?, 1)?;
    Ok((n == 3, format!("{n} cosets")))
}

fn f4_not_associated() -> Result<(bool, String)> {
    let k = f4()?;
    let w = k.generator();
    let a = SeriesElement::monomial(&k, w.clone(), 1, DEFAULT_PRECISION)?;
    let c = SeriesElement::monomial(&k, k.mul(&w, &w), 1, DEFAULT_PRECISION)?;
    let v = associate_in_r(&a, &c, 1)?;
    Ok((v.verdict == Verdict::No, v.note))
}

fn f4_twists() -> Result<(bool, String)> {
    let k = f4()?;
    let reps = CosetSpace::new(&k, 1)?.transversal();
    let fams = crate::dplusm::twist_family(&k, 2, &reps, DEFAULT_PRECISION)?;
    let t2 = SeriesElement::monomial(&k, k.one(), 2, DEFAULT_PRECISION)?;
    let mut ok = fams.len() == 3;
    for (i, f) in fams.iter().enumerate() {
        ok &= product(f)? == t2;
        for g in &fams[i + 1..] {
            ok &= !componentwise_associated(f, g, 1)?;
        }
    }
    Ok((ok, format!("{} factorizations over the transversal {}", fams.len(), joined(&reps))))
}

fn f4_membership() -> Result<(bool, String)> {
    let k = f4()?;
    let inside = parse_series(&k, "1 + [0,1]*t", DEFAULT_PRECISION)?;
    let outside = parse_series(&k, "[0,1] + t", DEFAULT_PRECISION)?;
    let ok = is_member_r(&inside, 1)? && !is_member_r(&outside, 1)?;
    Ok((ok, format!("{inside} in R; {outside} not in R")))
}

fn sqrt2_twists() -> Result<(bool, String)> {
    let fam = sqrt2_twist_family(8)?;
    let mut ok = true;
    for (i, (u, _)) in fam.iter().enumerate() {
        for (v, _) in &fam[i + 1..] {
            ok &= !sqrt2_same_coset(u, v)?;
        }
    }
    Ok((ok, format!("{} pairwise distinct cosets", fam.len())))
}

// ---- grams -----------------------------------------------------------------

fn grams_atoms() -> Result<(bool, String)> {
    let g = MonoidPresentation::grams();
    let mut bad = Vec::new();
    for n in 1..=10 {
        let a = FamilyRule::Grams.generator(n)?.expect("infinite family");
        if !is_atom(&g, &Element::Rat(a), b())?.verdict.is_yes() {
            bad.push(n);
        }
    }
    Ok((bad.is_empty(), format!("failures at n = {bad:?}")))
}

fn grams_lengths() -> Result<(bool, String)> {
    let l = length_set(&MonoidPresentation::grams(), &e("1"), b().with_truncation(5))?;
    let want = [6u64, 20, 56, 176, 416];
    let ok = want.iter().all(|n| l.items.contains(n));
    Ok((ok, format!("{} lengths found at truncation 5, smallest {:?}", l.items.len(), l.items.iter().take(5).collect::<Vec<_>>())))
}

fn grams_atom_divisors() -> Result<(bool, String)> {
    let d = atom_divisors(&MonoidPresentation::grams(), &e("1"), b())?;
    Ok((d.items.len() >= 5, format!("{} atoms: {}", d.items.len(), joined(&d.items))))
}

fn grams_not_bf() -> Result<(bool, String)> {
    Ok(verdict_is(&probe(&MonoidPresentation::grams(), Property::Bf, &[], b())?, Verdict::No))
}

fn grams_mcds() -> Result<(bool, String)> {
    let g = MonoidPresentation::grams();
    let r = probe(&g, Property::McdFinite, &[], b())?;
    let budget = b().with_truncation(4);
    let mut sizes = Vec::new();
    for pair in [["1/6", "1/20"], ["1/2", "3/4"], ["1", "7/6"]] {
        let out = mcds(&g, &[e(pair[0]), e(pair[1])], budget)?;
        sizes.push(out.items.len());
    }
    let ok = r.verdict == Verdict::UnknownAtBudget && sizes.iter().all(|&n| n <= budget.witness_limit.max(1) * 4);
    Ok((ok, format!("probe {}; MCD counts on sampled pairs {sizes:?}", r.verdict)))
}

// ---- quadrant-union --------------------------------------------------------

fn quadrant_atoms() -> Result<(bool, String)> {
    let a = atoms_up_to(&MonoidPresentation::QuadrantUnion, None, b())?;
    Ok((a.exact && a.items == vec![Element::Pair(0, 1), Element::Pair(1, 0)], joined(&a.items)))
}

fn quadrant_no_factorization() -> Result<(bool, String)> {
    let z = factorizations(&MonoidPresentation::QuadrantUnion, &e("(-1,2)"), b())?;
    Ok((z.exact && z.items.is_empty(), format!("{} factorizations, exact = {}", z.items.len(), z.exact)))
}

fn quadrant_probes() -> Result<(bool, String)> {
    let q = MonoidPresentation::QuadrantUnion;
    let idf = probe(&q, Property::Idf, &[], b())?;
    let atomic = probe(&q, Property::Atomic, &[], b())?;
    Ok((
        idf.verdict == Verdict::Yes && atomic.verdict == Verdict::No,
        format!("IDF {}, Atomic {}", idf.verdict, atomic.verdict),
    ))
}

// ---- uff-not-idf -----------------------------------------------------------

fn ps_ray_divides_two() -> Result<(bool, String)> {
    let m = ps_ray();
    let mut bad = Vec::new();
    for n in 1..=10 {
        let a = FamilyRule::PrimesSquared.generator(n)?.expect("infinite family");
        if !divides(&m, &Element::Rat(a), &e("2"), b())?.verdict.is_yes() {
            bad.push(n);
        }
    }
    Ok((bad.is_empty(), format!("failures at n = {bad:?}")))
}

fn ps_ray_atom_divisors() -> Result<(bool, String)> {
    let d = atom_divisors(&ps_ray(), &e("2"), b())?;
    Ok((d.items.len() >= 5, format!("{} atoms: {}", d.items.len(), joined(&d.items))))
}

fn ps_ray_uff() -> Result<(bool, String)> {
    let r = probe(&ps_ray(), Property::Uff, &[e("2"), e("43/36")], b())?;
    Ok((r.verdict == Verdict::Yes && r.scope == Scope::Sample, format!("verdict {} ({:?})", r.verdict, r.scope)))
}

fn ps_ray_not_idf() -> Result<(bool, String)> {
    Ok(verdict_is(&probe(&ps_ray(), Property::Idf, &[], b())?, Verdict::No))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_sorted_and_unique() {
        let ids = list_fixtures();
        assert!(ids.len() >= 6);
        assert!(ids.windows(2).all(|w| w[0] < w[1]));
        for id in ["grams", "bf-not-idf", "uff-not-idf", "quadrant-union", "dplusm-f4", "antimatter-dyadic"] {
            assert!(ids.contains(&id));
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(matches!(run_fixture("nope"), Err(Error::InvalidArgument(_))));
    }
}
