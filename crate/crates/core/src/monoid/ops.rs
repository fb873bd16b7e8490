//! Public monoid operations.

use super::engine::{Engine, Member};
use super::presentation::{Budget, Element, MonoidPresentation};
use super::quadrant;
use super::report::{Factorization, Listing, ProbeReport, Verdict, Witness};
use crate::error::{arg, Error, Result};
use crate::numtheory::Rational;

/// Radius of the window of first coordinates streamed for infinite quadrant divisor sets.
fn quadrant_radius(c: i64, budget: &Budget) -> i64 {
    c.abs() + budget.truncation_index as i64
}

fn quadrant_cap(budget: &Budget) -> usize {
    usize::try_from(budget.enumeration_cap).unwrap_or(usize::MAX).min(100_000)
}

fn rational<'e>(m: &MonoidPresentation, q: &'e Element) -> Result<&'e Rational> {
    m.check_kind(q)?;
    Ok(q.as_rational().expect("kind checked"))
}

fn pair(m: &MonoidPresentation, q: &Element) -> Result<(i64, i64)> {
    m.check_kind(q)?;
    Ok(q.as_pair().expect("kind checked"))
}

fn rationals(m: &MonoidPresentation, set: &[Element]) -> Result<Vec<Rational>> {
    set.iter().map(|q| rational(m, q).cloned()).collect()
}

fn lift(l: Listing<Rational>) -> Listing<Element> {
    Listing {
        items: l.items.into_iter().map(Element::Rat).collect(),
        exact: l.exact,
        cap_hit: l.cap_hit,
        undecided: l.undecided.into_iter().map(Element::Rat).collect(),
    }
}

fn membership_witness(element: Element, m: &Member) -> Witness {
    match &m.combination {
        Some(z) => Witness::Representation {
            element,
            combination: z.clone(),
        },
        None => Witness::Membership {
            element,
            verdict: m.verdict,
        },
    }
}

fn quadrant_membership(a: i64, b: i64) -> (Verdict, Witness) {
    let element = Element::Pair(a, b);
    match quadrant::factorization(a, b) {
        Some(z) => (
            Verdict::Yes,
            Witness::Representation {
                element,
                combination: z,
            },
        ),
        None => {
            let v = Verdict::from_bool(quadrant::is_member(a, b));
            (v, Witness::Membership { element, verdict: v })
        }
    }
}

fn require_member(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<()> {
    if is_member(m, q, budget)?.verdict.is_no() {
        return Err(Error::Domain(format!("{q} is not a member of {m}")));
    }
    Ok(())
}

fn nonempty(set: &[Element]) -> Result<()> {
    if set.is_empty() {
        return arg("the element set must be nonempty");
    }
    Ok(())
}

pub fn is_member(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<ProbeReport> {
    if m.is_pair_kind() {
        let (a, b) = pair(m, q)?;
        let (v, w) = quadrant_membership(a, b);
        return Ok(ProbeReport::new(v, budget).with_witness(w));
    }
    let q_rat = rational(m, q)?;
    let engine = Engine::new(m, budget)?;
    let res = engine.member(q_rat)?;
    let mut report = ProbeReport::new(res.verdict, budget).with_witness(membership_witness(q.clone(), &res));
    if res.combination.is_none() && res.verdict.is_yes() {
        report = report.note(format!("{q} lies in the threshold ray"));
    }
    Ok(report.with_used(engine.used()))
}

pub fn divides(m: &MonoidPresentation, d: &Element, q: &Element, budget: Budget) -> Result<ProbeReport> {
    if m.is_pair_kind() {
        let (a, b) = pair(m, d)?;
        let (c, e) = pair(m, q)?;
        let (vd, wd) = quadrant_membership(a, b);
        let (vr, wr) = quadrant_membership(c - a, e - b);
        let v = if vd.is_yes() && vr.is_yes() { Verdict::Yes } else { Verdict::No };
        return Ok(ProbeReport::new(v, budget).with_witness(wd).with_witness(wr));
    }
    let d_rat = rational(m, d)?;
    let q_rat = rational(m, q)?;
    let engine = Engine::new(m, budget)?;
    let (v, md, mr) = engine.divides(d_rat, q_rat)?;
    let mut report = ProbeReport::new(v, budget).with_witness(membership_witness(d.clone(), &md));
    match (mr, q_rat.checked_sub(d_rat)) {
        (Some(mr), Some(rest)) => report = report.with_witness(membership_witness(Element::Rat(rest), &mr)),
        (_, None) => report = report.note(format!("{d} exceeds {q}")),
        _ => {}
    }
    Ok(report.with_used(engine.used()))
}

pub fn divisors(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<Listing<Element>> {
    require_member(m, q, budget)?;
    if m.is_pair_kind() {
        let (c, d) = pair(m, q)?;
        let rows = quadrant::divisor_rows(c, d);
        let items = quadrant::rows_points(&rows, quadrant_radius(c, &budget), quadrant_cap(&budget));
        return Ok(if quadrant::rows_are_finite(&rows) {
            Listing::exact(items)
        } else {
            Listing::partial(items)
        });
    }
    let engine = Engine::new(m, budget)?;
    Ok(lift(engine.divisors(rational(m, q)?)?))
}

pub fn is_atom(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<ProbeReport> {
    m.check_kind(q)?;
    if q.is_identity() {
        return arg("the identity is not an atom candidate");
    }
    let membership = is_member(m, q, budget)?;
    match membership.verdict {
        Verdict::No => return Err(Error::Domain(format!("{q} is not a member of {m}"))),
        Verdict::UnknownAtBudget => {
            return Ok(ProbeReport::new(Verdict::UnknownAtBudget, budget)
                .note(format!("membership of {q} is undecided at this budget"))
                .with_used(membership.budget_used))
        }
        Verdict::Yes => {}
    }
    if m.is_pair_kind() {
        let (a, b) = pair(m, q)?;
        return Ok(match quadrant::find_split(a, b) {
            Some((u, v)) => ProbeReport::new(Verdict::No, budget).with_witness(Witness::Decomposition {
                element: q.clone(),
                left: Element::Pair(u.0, u.1),
                right: Element::Pair(v.0, v.1),
            }),
            None => ProbeReport::new(Verdict::Yes, budget)
                .with_witness(Witness::Factorizations {
                    element: q.clone(),
                    factorizations: vec![Factorization::single(q.clone())],
                    exact: true,
                })
                .note("no split into nonzero members exists"),
        });
    }
    let engine = Engine::new(m, budget)?;
    let ans = engine.is_atom(rational(m, q)?)?;
    let mut report = ProbeReport::new(ans.verdict, budget);
    report = match (ans.verdict, ans.split) {
        (Verdict::No, Some((u, v))) => report.with_witness(Witness::Decomposition {
            element: q.clone(),
            left: Element::Rat(u),
            right: Element::Rat(v),
        }),
        (Verdict::Yes, _) => report.with_witness(Witness::Membership {
            element: q.clone(),
            verdict: Verdict::Yes,
        }),
        _ => report.note(format!("no split of {q} found at this budget")),
    };
    Ok(report.with_used(engine.used()))
}

/// Atoms with value at most `cutoff` (when given) among the first
/// `truncation_index` family generators.
pub fn atoms_up_to(m: &MonoidPresentation, cutoff: Option<&Element>, budget: Budget) -> Result<Listing<Element>> {
    if m.is_pair_kind() {
        let atoms = quadrant::ATOMS
            .iter()
            .map(|&(a, b)| Element::Pair(a, b))
            .filter(|a| cutoff.is_none_or(|c| a <= c))
            .collect();
        return Ok(Listing::exact(atoms));
    }
    let cutoff = cutoff.map(|c| rational(m, c)).transpose()?;
    let engine = Engine::new(m, budget)?;
    Ok(lift(engine.atoms_up_to(cutoff)?))
}

pub fn factorizations(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<Listing<Factorization>> {
    require_member(m, q, budget)?;
    if m.is_pair_kind() {
        let (a, b) = pair(m, q)?;
        return Ok(Listing::exact(quadrant::factorization(a, b).into_iter().collect()));
    }
    Engine::new(m, budget)?.factorizations(rational(m, q)?)
}

/// Lengths of the nonempty factorizations; the identity has the empty length set.
pub fn length_set(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<Listing<u64>> {
    require_member(m, q, budget)?;
    if m.is_pair_kind() {
        let z = factorizations(m, q, budget)?;
        let mut lengths: Vec<u64> = z.items.iter().filter(|z| !z.is_empty()).map(Factorization::len).collect();
        lengths.sort();
        lengths.dedup();
        return Ok(Listing::exact(lengths));
    }
    Engine::new(m, budget)?.length_set(rational(m, q)?)
}

pub fn atom_divisors(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<Listing<Element>> {
    require_member(m, q, budget)?;
    if m.is_pair_kind() {
        let (c, d) = pair(m, q)?;
        let atoms = quadrant::ATOMS
            .iter()
            .filter(|&&(a, b)| quadrant::is_member(c - a, d - b))
            .map(|&(a, b)| Element::Pair(a, b))
            .collect();
        return Ok(Listing::exact(atoms));
    }
    Ok(lift(Engine::new(m, budget)?.atom_divisors(rational(m, q)?)?))
}

pub fn common_divisors(m: &MonoidPresentation, set: &[Element], budget: Budget) -> Result<Listing<Element>> {
    nonempty(set)?;
    for q in set {
        require_member(m, q, budget)?;
    }
    if m.is_pair_kind() {
        let pairs: Vec<(i64, i64)> = set.iter().map(|q| pair(m, q)).collect::<Result<_>>()?;
        let rows = quadrant::common_rows(&pairs);
        let radius = pairs.iter().map(|p| quadrant_radius(p.0, &budget)).max().unwrap_or(0);
        let items = quadrant::rows_points(&rows, radius, quadrant_cap(&budget));
        return Ok(if quadrant::rows_are_finite(&rows) {
            Listing::exact(items)
        } else {
            Listing::partial(items)
        });
    }
    let set = rationals(m, set)?;
    Ok(lift(Engine::new(m, budget)?.common_divisors(&set)?))
}

/// Maximal common divisors, each re-verified by the definitional check.
pub fn mcds(m: &MonoidPresentation, set: &[Element], budget: Budget) -> Result<Listing<Element>> {
    nonempty(set)?;
    for q in set {
        require_member(m, q, budget)?;
    }
    if m.is_pair_kind() {
        let pairs: Vec<(i64, i64)> = set.iter().map(|q| pair(m, q)).collect::<Result<_>>()?;
        let rows = quadrant::common_rows(&pairs);
        let finite = quadrant::rows_are_finite(&rows);
        let radius = pairs.iter().map(|p| quadrant_radius(p.0, &budget)).max().unwrap_or(0);
        let mut out = if finite {
            Listing::exact(Vec::new())
        } else {
            Listing::partial(Vec::new())
        };
        for d in quadrant::rows_points(&rows, radius, quadrant_cap(&budget)) {
            if !finite && out.items.len() >= budget.witness_limit {
                break;
            }
            let (a, b) = d.as_pair().expect("pair");
            let shifted: Vec<(i64, i64)> = pairs.iter().map(|&(c, e)| (c - a, e - b)).collect();
            if !quadrant::has_nonzero_common_divisor(&shifted) {
                out.items.push(d);
            }
        }
        return Ok(out);
    }
    let set = rationals(m, set)?;
    Ok(lift(Engine::new(m, budget)?.mcds(&set)?))
}

/// At most one factorization of `q`; `exact` then means "none exists" when empty.
pub(crate) fn first_factorization(m: &MonoidPresentation, q: &Element, budget: Budget) -> Result<Listing<Factorization>> {
    require_member(m, q, budget)?;
    if m.is_pair_kind() {
        return factorizations(m, q, budget);
    }
    let engine = Engine::new(m, budget)?;
    let mut first = None;
    let end = engine.for_each_factorization(rational(m, q)?, &mut |z| {
        first = Some(z);
        std::ops::ControlFlow::Break(())
    })?;
    let items: Vec<Factorization> = first.into_iter().collect();
    Ok(if end.exact || !items.is_empty() {
        Listing::exact(items)
    } else {
        Listing::partial(items)
    })
}
