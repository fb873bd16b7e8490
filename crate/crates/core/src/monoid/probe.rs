//! Finiteness-property probes.
//!
//! A probe answers from a structural certificate when the presentation has
//! one, and otherwise searches a sample for a counterexample. A sample that
//! passes only supports a verdict about that sample.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::engine::{grams_pure_factorizations, Engine, Structure, ThresholdBase};
use super::family;
use super::ops;
use super::presentation::{Budget, Element, MonoidPresentation};
use super::report::{Factorization, ProbeReport, Scope, Verdict, Witness};
use crate::error::{Error, Result};
use crate::numtheory::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    Atomic,
    #[serde(rename = "BF")]
    Bf,
    #[serde(rename = "IDF")]
    Idf,
    #[serde(rename = "MCDFinite")]
    McdFinite,
    #[serde(rename = "FF")]
    Ff,
    #[serde(rename = "UFF")]
    Uff,
    Antimatter,
}

impl Property {
    pub const ALL: [Property; 7] = [
        Property::Atomic,
        Property::Bf,
        Property::Idf,
        Property::McdFinite,
        Property::Ff,
        Property::Uff,
        Property::Antimatter,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Atomic => "Atomic",
            Property::Bf => "BF",
            Property::Idf => "IDF",
            Property::McdFinite => "MCDFinite",
            Property::Ff => "FF",
            Property::Uff => "UFF",
            Property::Antimatter => "Antimatter",
        })
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match key.as_str() {
            "atomic" => Property::Atomic,
            "bf" => Property::Bf,
            "idf" => Property::Idf,
            "mcdfinite" => Property::McdFinite,
            "ff" => Property::Ff,
            "uff" => Property::Uff,
            "antimatter" => Property::Antimatter,
            _ => return Err(Error::Parse(format!("unknown property {s:?}"))),
        })
    }
}

/// Structure of any presentation, including the quadrant union.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Puiseux(Structure),
    Quadrant,
}

fn shape_of(m: &MonoidPresentation, budget: Budget) -> Result<Shape> {
    if m.is_pair_kind() {
        Ok(Shape::Quadrant)
    } else {
        Ok(Shape::Puiseux(Engine::new(m, budget)?.structure()))
    }
}

enum Outcome {
    Pass(Witness),
    Counter(Vec<Witness>),
    Unknown(String),
}

fn rat(q: &Element) -> Option<&Rational> {
    q.as_rational()
}

fn yes(budget: Budget, why: impl Into<String>) -> ProbeReport {
    ProbeReport::new(Verdict::Yes, budget).note(why)
}

/// `2 theta + delta / 2`, a member with infinitely many two-atom factorizations
/// when the base is finitely generated (`delta = min(theta, smallest base atom)`).
fn two_atom_element(theta: &Rational, smallest: &Option<Rational>) -> Rational {
    let delta = match smallest {
        Some(m0) => m0.min(theta).clone(),
        None => theta.clone(),
    };
    theta.mul_int(2) + delta.half()
}

fn default_sample(m: &MonoidPresentation, shape: &Shape, budget: Budget) -> Result<Vec<Element>> {
    let q = |n: u64, d: u64| Element::rat(n, d);
    Ok(match shape {
        Shape::Quadrant => vec![
            Element::Pair(1, 0),
            Element::Pair(0, 1),
            Element::Pair(-1, 2),
            Element::Pair(2, 3),
            Element::Pair(3, 0),
        ],
        Shape::Puiseux(s) => match s {
            Structure::Trivial => Vec::new(),
            Structure::Grams => vec![q(1, 1)],
            Structure::PrimesSquared => vec![q(2, 1), q(3, 4)],
            Structure::Halving(a1) => vec![Element::Rat(a1.clone())],
            Structure::FinitelyGenerated | Structure::Open => {
                let atoms = ops::atoms_up_to(m, None, budget.with_truncation(budget.truncation_index.min(3)))?;
                let mut out: Vec<Element> = atoms.items.iter().chain(&atoms.undecided).take(3).cloned().collect();
                if let [Element::Rat(a), Element::Rat(b), ..] = out.as_slice() {
                    out.push(Element::Rat(a + b));
                }
                out
            }
            Structure::Threshold { base, theta } if !matches!(base, ThresholdBase::Discrete(_)) => vec![
                Element::Rat(theta.clone()),
                Element::Rat(theta + &theta.div_int(4)),
                Element::Rat(theta + &theta.half()),
                Element::Rat(theta.mul_int(2)),
            ],
            Structure::Threshold { base, theta } => {
                let mut out = vec![
                    Element::Rat(theta.clone()),
                    Element::Rat(theta + &theta.half()),
                    Element::Rat(theta.mul_int(2)),
                    Element::Rat(theta.mul_int(3)),
                ];
                for j in 2..=4u64 {
                    out.push(Element::Rat(theta + &theta.div_int(1 << j)));
                }
                for p in [7u64, 11, 13] {
                    out.push(Element::Rat(theta + &Rational::new(1, p)));
                }
                if let ThresholdBase::Discrete(smallest) = base {
                    out.push(Element::Rat(two_atom_element(theta, smallest)));
                }
                out
            }
        },
    })
}

fn factorization_witness(q: &Element, z: &super::report::Listing<Factorization>, limit: usize) -> Witness {
    Witness::Factorizations {
        element: q.clone(),
        factorizations: z.items.iter().take(limit).cloned().collect(),
        exact: z.exact && z.items.len() <= limit,
    }
}

/// The Grams form of `q` when its factorizations are those of the Grams monoid:
/// in the monoid itself, or at or below the threshold of a Grams ray.
fn grams_part(shape: &Shape, q: &Rational) -> Result<Option<family::GramsForm>> {
    let applies = match shape {
        Shape::Puiseux(Structure::Grams) => true,
        Shape::Puiseux(Structure::Threshold { base: ThresholdBase::Grams, theta }) => q <= theta,
        _ => false,
    };
    if !applies {
        return Ok(None);
    }
    Ok(family::grams_form(q)?.filter(|f| !f.remainder.is_zero()))
}

/// Lengths from placing a Grams remainder on single indices (pairwise distinct).
fn grams_family(shape: &Shape, q: &Element, budget: Budget) -> Result<Option<Vec<(u64, Factorization)>>> {
    let Some(q) = rat(q) else { return Ok(None) };
    let Some(form) = grams_part(shape, q)? else { return Ok(None) };
    let fam = grams_pure_factorizations(&form, budget.truncation_index, budget.witness_limit)?;
    Ok((fam.len() >= budget.witness_limit).then_some(fam))
}

fn infinite_atom_divisors(shape: &Shape, q: &Element) -> Result<bool> {
    let Some(q) = rat(q) else { return Ok(false) };
    Ok(match shape {
        _ if grams_part(shape, q)?.is_some() => true,
        Shape::Puiseux(Structure::Threshold { base, theta }) => match base {
            ThresholdBase::Discrete(_) => q > &theta.mul_int(2),
            ThresholdBase::Grams | ThresholdBase::PrimesSquared => q > theta,
            _ => false,
        },
        _ => false,
    })
}

fn check_element(
    m: &MonoidPresentation,
    shape: &Shape,
    property: Property,
    q: &Element,
    budget: Budget,
) -> Result<Outcome> {
    let limit = budget.witness_limit;
    match property {
        Property::Atomic | Property::Bf | Property::Ff | Property::Uff => {
            if property != Property::Atomic {
                if let Some(fam) = grams_family(shape, q, budget)? {
                    let w = if property == Property::Bf {
                        Witness::Lengths {
                            element: q.clone(),
                            lengths: fam.iter().map(|(l, _)| *l).collect(),
                            exact: false,
                        }
                    } else {
                        Witness::Factorizations {
                            element: q.clone(),
                            factorizations: fam.into_iter().map(|(_, z)| z).collect(),
                            exact: false,
                        }
                    };
                    return Ok(Outcome::Counter(vec![
                        w,
                        Witness::Note {
                            text: format!("the dyadic remainder of {q} can sit on any single generator index"),
                        },
                    ]));
                }
            }
            let z = if property == Property::Atomic {
                ops::first_factorization(m, q, budget)?
            } else {
                ops::factorizations(m, q, budget)?
            };
            let nonzero = !q.is_identity();
            if z.items.is_empty() && z.exact && nonzero {
                // not atomic: refutes Atomic, BF and FF; vacuous for U-FF
                return Ok(if property == Property::Uff {
                    Outcome::Pass(factorization_witness(q, &z, limit))
                } else {
                    Outcome::Counter(vec![factorization_witness(q, &z, limit)])
                });
            }
            match property {
                Property::Atomic if !z.items.is_empty() => Ok(Outcome::Pass(factorization_witness(q, &z, limit))),
                Property::Bf => {
                    if z.exact {
                        let mut lengths: Vec<u64> = z.items.iter().filter(|z| !z.is_empty()).map(Factorization::len).collect();
                        lengths.dedup();
                        lengths.sort();
                        lengths.dedup();
                        Ok(Outcome::Pass(Witness::Lengths {
                            element: q.clone(),
                            lengths,
                            exact: true,
                        }))
                    } else {
                        Ok(Outcome::Unknown(format!("the factorizations of {q} are not complete at this budget")))
                    }
                }
                Property::Ff | Property::Uff if z.exact => Ok(Outcome::Pass(factorization_witness(q, &z, limit))),
                _ => Ok(Outcome::Unknown(format!("the factorizations of {q} are not complete at this budget"))),
            }
        }
        Property::Idf => {
            let d = ops::atom_divisors(m, q, budget)?;
            let w = Witness::AtomDivisors {
                element: q.clone(),
                atoms: d.items.clone(),
                exact: d.exact,
            };
            if d.exact {
                Ok(Outcome::Pass(w))
            } else if d.items.len() >= limit && infinite_atom_divisors(shape, q)? {
                Ok(Outcome::Counter(vec![
                    w,
                    Witness::Note {
                        text: format!("{q} is divisible by an infinite family of atoms; {limit} are listed"),
                    },
                ]))
            } else {
                Ok(Outcome::Unknown(format!("atom divisors of {q} are not complete at this budget")))
            }
        }
        Property::Antimatter => {
            if q.is_identity() {
                return Ok(Outcome::Pass(Witness::Note { text: "identity".into() }));
            }
            let a = ops::is_atom(m, q, budget)?;
            Ok(match a.verdict {
                Verdict::Yes => Outcome::Counter(vec![Witness::Atoms {
                    atoms: vec![q.clone()],
                    exact: false,
                }]),
                Verdict::No => Outcome::Pass(a.witnesses.into_iter().next().unwrap_or(Witness::Note { text: String::new() })),
                Verdict::UnknownAtBudget => Outcome::Unknown(format!("atomicity of {q} is undecided")),
            })
        }
        Property::McdFinite => unreachable!("MCD probes use the whole sample as one set"),
    }
}

fn check_set(m: &MonoidPresentation, set: &[Element], budget: Budget) -> Result<Outcome> {
    let l = ops::mcds(m, set, budget)?;
    let w = Witness::Mcds {
        set: set.to_vec(),
        mcds: l.items.clone(),
        exact: l.exact,
    };
    if l.exact {
        Ok(Outcome::Pass(w))
    } else if l.items.len() >= budget.witness_limit {
        Ok(Outcome::Counter(vec![
            w,
            Witness::Note {
                text: format!(
                    "candidate common divisors form an interval; {} pairwise distinct maximal ones are listed",
                    l.items.len()
                ),
            },
        ]))
    } else {
        Ok(Outcome::Unknown(format!("the MCDs of {set:?} are not complete at this budget")))
    }
}

fn counter_report(ws: Vec<Witness>, budget: Budget) -> ProbeReport {
    let mut r = ProbeReport::new(Verdict::No, budget);
    for w in ws {
        r = r.with_witness(w);
    }
    r
}

/// Runs the sample checks, stopping at the first counterexample.
fn run_sample(
    m: &MonoidPresentation,
    shape: &Shape,
    property: Property,
    sample: &[Element],
    budget: Budget,
) -> Result<(Option<ProbeReport>, Vec<Witness>, Vec<String>)> {
    let mut passes = Vec::new();
    let mut unknown = Vec::new();
    if property == Property::McdFinite {
        if !sample.is_empty() {
            match check_set(m, sample, budget)? {
                Outcome::Counter(ws) => return Ok((Some(counter_report(ws, budget)), passes, unknown)),
                Outcome::Pass(w) => passes.push(w),
                Outcome::Unknown(s) => unknown.push(s),
            }
        }
        return Ok((None, passes, unknown));
    }
    for q in sample {
        match check_element(m, shape, property, q, budget)? {
            Outcome::Counter(ws) => return Ok((Some(counter_report(ws, budget)), passes, unknown)),
            Outcome::Pass(w) => passes.push(w),
            Outcome::Unknown(s) => unknown.push(s),
        }
    }
    Ok((None, passes, unknown))
}

fn atoms_witness(m: &MonoidPresentation, budget: Budget) -> Result<Witness> {
    let a = ops::atoms_up_to(m, None, budget)?;
    Ok(Witness::Atoms {
        atoms: a.items,
        exact: a.exact,
    })
}

/// A structural verdict, when the presentation class admits one.
fn certified(m: &MonoidPresentation, shape: &Shape, property: Property, budget: Budget) -> Result<Option<ProbeReport>> {
    use Property::*;
    let limit = budget.witness_limit;
    let s = match shape {
        Shape::Quadrant => {
            return Ok(match property {
                Idf => Some(yes(budget, "exactly two atoms").with_witness(atoms_witness(m, budget)?)),
                Uff => Some(yes(budget, "atomic elements are N0 x N0, each with a unique factorization")),
                Antimatter => Some(ProbeReport::new(Verdict::No, budget).with_witness(atoms_witness(m, budget)?)),
                _ => None,
            })
        }
        Shape::Puiseux(s) => s,
    };
    let not_atomic = |q: Rational| -> Result<ProbeReport> {
        let e = Element::Rat(q);
        let z = ops::factorizations(m, &e, budget)?;
        Ok(ProbeReport::new(Verdict::No, budget).with_witness(factorization_witness(&e, &z, limit)))
    };
    Ok(match (s, property) {
        (Structure::Trivial, Antimatter) => Some(yes(budget, "the trivial monoid has no atoms")),
        (Structure::Trivial, _) => Some(yes(budget, "the trivial monoid")),
        (Structure::FinitelyGenerated, Antimatter)
        | (Structure::Grams, Antimatter)
        | (Structure::PrimesSquared, Antimatter) => {
            Some(ProbeReport::new(Verdict::No, budget).with_witness(atoms_witness(m, budget.with_truncation(1))?))
        }
        (Structure::FinitelyGenerated, _) => Some(
            yes(budget, "finitely generated with positive generators: every element has finitely many factorizations")
                .with_witness(atoms_witness(m, budget)?),
        ),
        (Structure::PrimesSquared, _) => Some(yes(
            budget,
            "only generators whose prime divides the denominator or is below the element can occur, so every factorization set is finite",
        )),
        (Structure::Grams, Atomic) => Some(yes(budget, "every defining generator is an atom")),
        (Structure::Grams, McdFinite) => Some(
            ProbeReport::new(Verdict::UnknownAtBudget, budget)
                .note("external theorem: not certified by this engine"),
        ),
        (Structure::Halving(a1), Antimatter) => Some(
            yes(budget, "every nonzero member q splits as q/2 + q/2").with_witness(Witness::HalvingSplit {
                element: Element::Rat(a1.clone()),
                half: Element::Rat(a1.half()),
            }),
        ),
        (Structure::Halving(a1), Atomic | Bf | Ff) => Some(not_atomic(a1.clone())?),
        (Structure::Halving(_), Idf | Uff) => Some(yes(budget, "no atoms")),
        (Structure::Halving(_), McdFinite) => Some(yes(
            budget,
            "divisibility is the order on members, so the smallest element is the only MCD",
        )),
        (Structure::Threshold { base, theta }, p) => match (base, p) {
            (ThresholdBase::Discrete(_), Atomic | Bf) => Some(yes(
                budget,
                "nonzero members are bounded away from zero, so lengths are bounded",
            )),
            (ThresholdBase::Discrete(smallest), Ff | Uff) => {
                let q = Element::Rat(two_atom_element(theta, smallest));
                let z = ops::factorizations(m, &q, budget)?;
                (z.items.len() >= limit).then(|| {
                    ProbeReport::new(Verdict::No, budget)
                        .with_witness(factorization_witness(&q, &z, limit))
                        .note(format!("{q} = a + ({q} - a) for a continuum of atoms a above the threshold"))
                })
            }
            (ThresholdBase::Discrete(_), Idf) => {
                let q = Element::Rat(theta.mul_int(3));
                let d = ops::atom_divisors(m, &q, budget)?;
                (d.items.len() >= limit).then(|| {
                    ProbeReport::new(Verdict::No, budget)
                        .with_witness(Witness::AtomDivisors {
                            element: q.clone(),
                            atoms: d.items,
                            exact: false,
                        })
                        .note(format!("every atom in the interval above the threshold divides {q}"))
                })
            }
            (ThresholdBase::Discrete(None), McdFinite) => {
                let set = vec![Element::Rat(theta.mul_int(3)), Element::Rat(theta.mul_int(7).half())];
                let l = ops::mcds(m, &set, budget)?;
                (l.items.len() >= limit).then(|| {
                    ProbeReport::new(Verdict::No, budget)
                        .with_witness(Witness::Mcds {
                            set: set.clone(),
                            mcds: l.items,
                            exact: false,
                        })
                        .note("every d in (theta, 2 theta] is a maximal common divisor of the set")
                })
            }
            (ThresholdBase::Grams | ThresholdBase::PrimesSquared, Idf) => {
                let q = Element::Rat(theta.mul_int(2));
                let d = ops::atom_divisors(m, &q, budget)?;
                (d.items.len() >= limit).then(|| {
                    ProbeReport::new(Verdict::No, budget)
                        .with_witness(Witness::AtomDivisors {
                            element: q.clone(),
                            atoms: d.items,
                            exact: false,
                        })
                        .note(format!("every base generator below the threshold divides {q}"))
                })
            }
            (ThresholdBase::PrimesSquared, Uff) => Some(yes(
                budget,
                "atoms are base atoms and possibly the threshold; the base has finite factorization sets",
            )),
            (ThresholdBase::Halving, Idf | Uff) => Some(yes(budget, "the threshold is the only possible atom")),
            (_, Antimatter) => {
                let a = ops::atoms_up_to(m, None, budget)?;
                if !a.items.is_empty() {
                    Some(ProbeReport::new(Verdict::No, budget).with_witness(Witness::Atoms {
                        atoms: a.items,
                        exact: a.exact,
                    }))
                } else if a.exact {
                    Some(yes(budget, "no atoms").with_witness(Witness::Atoms {
                        atoms: Vec::new(),
                        exact: true,
                    }))
                } else {
                    None
                }
            }
            _ => None,
        },
        (Structure::Open, Antimatter) => {
            let a = ops::atoms_up_to(m, None, budget)?;
            (!a.items.is_empty()).then(|| {
                ProbeReport::new(Verdict::No, budget).with_witness(Witness::Atoms {
                    atoms: a.items,
                    exact: false,
                })
            })
        }
        _ => None,
    })
}

/// Probes `property`. With a nonempty `sample` the checks run on the sample
/// (a `Yes` then has [`Scope::Sample`]); otherwise a structural certificate is
/// used when available, else a default sample is searched for counterexamples.
pub fn probe(m: &MonoidPresentation, property: Property, sample: &[Element], budget: Budget) -> Result<ProbeReport> {
    for q in sample {
        m.check_kind(q)?;
        if ops::is_member(m, q, budget)?.verdict.is_no() {
            return Err(Error::Domain(format!("sample element {q} is not a member of {m}")));
        }
    }
    let shape = shape_of(m, budget)?;
    if !sample.is_empty() {
        let (counter, passes, unknown) = run_sample(m, &shape, property, sample, budget)?;
        if let Some(r) = counter {
            return Ok(r);
        }
        if property == Property::Antimatter {
            // a sample without atoms says nothing about the other members
            if let Some(r) = certified(m, &shape, property, budget)? {
                return Ok(r);
            }
        }
        if unknown.is_empty() {
            let mut r = ProbeReport::new(Verdict::Yes, budget).with_scope(Scope::Sample);
            for w in passes {
                r = r.with_witness(w);
            }
            return Ok(r);
        }
        let mut r = ProbeReport::new(Verdict::UnknownAtBudget, budget).with_scope(Scope::Sample);
        for s in unknown {
            r = r.note(s);
        }
        return Ok(r);
    }
    if let Some(r) = certified(m, &shape, property, budget)? {
        return Ok(r);
    }
    let default = default_sample(m, &shape, budget)?;
    let (counter, _, _) = run_sample(m, &shape, property, &default, budget)?;
    if let Some(r) = counter {
        return Ok(r);
    }
    Ok(ProbeReport::new(Verdict::UnknownAtBudget, budget)
        .note(format!("no certificate for {property} and no counterexample in the default sample")))
}
