//! Operation dispatch for the submonoids of `Q>=0`.

use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap};
use std::ops::ControlFlow;
use std::rc::Rc;

use super::family::{self, GramsForm};
use super::fg::FgEngine;
use super::kernel::EnumStats;
use super::presentation::{Budget, CustomFamily, Element, FamilyRule, MonoidPresentation};
use super::report::{BudgetUsed, Factorization, Listing, Verdict};
use super::threshold::{self, Region};
use crate::error::{Error, Result};
use crate::numtheory::Rational;

/// Deepest dyadic subdivision used when sampling a continuum of candidates.
const MAX_SAMPLE_DEPTH: usize = 10;
/// Subdivision depth for the candidate atoms of an infinite factorization set.
const MAX_GRID_DEPTH: usize = 4;
/// Search limit when looking for a small generator of a dense family.
const MAX_SCAN: usize = 100_000;
/// Most distinct divisors collected from an infinite divisor set.
const MAX_DIVISORS: usize = 10_000;

enum Shape<'a> {
    /// `FgPuiseux` or a finite custom family.
    Fg(FgEngine),
    Grams,
    PrimesSquared,
    /// A 2-divisible custom family `a_1 <N0[1/2]>`.
    Halving(Rational),
    /// A custom family without a certified procedure.
    Open(&'a CustomFamily),
    Threshold {
        base: Box<Engine<'a>>,
        theta: &'a Rational,
    },
}

/// How the base of a threshold union looks near zero.
enum BaseShape<'e> {
    /// Finitely generated (possibly trivial): members are discrete.
    Finite(&'e FgEngine),
    /// Members accumulate at zero and membership is exact.
    Dense,
    Other,
}

pub(crate) struct Member {
    pub verdict: Verdict,
    pub combination: Option<Factorization>,
}

pub(crate) struct AtomAnswer {
    pub verdict: Verdict,
    pub split: Option<(Rational, Rational)>,
}

impl AtomAnswer {
    fn yes() -> Self {
        AtomAnswer {
            verdict: Verdict::Yes,
            split: None,
        }
    }

    fn unknown() -> Self {
        AtomAnswer {
            verdict: Verdict::UnknownAtBudget,
            split: None,
        }
    }

    fn split(u: Rational, v: Rational) -> Self {
        AtomAnswer {
            verdict: Verdict::No,
            split: Some((u, v)),
        }
    }
}

pub(crate) struct StreamEnd {
    /// Every factorization was visited (unless the visitor stopped early).
    pub exact: bool,
}

pub(crate) struct Engine<'a> {
    shape: Shape<'a>,
    budget: Budget,
    used: Rc<Cell<BudgetUsed>>,
    cap_hit: Rc<Cell<bool>>,
    atom_cache: RefCell<HashMap<Rational, Verdict>>,
}

fn split_of(z: &Factorization, q: &Rational) -> (Rational, Rational) {
    let (first, _) = z.parts().next().expect("a split needs at least two parts");
    let u = first.as_rational().expect("rational atom").clone();
    let v = q.checked_sub(&u).expect("part of a sum");
    (u, v)
}

fn meet(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
        (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
        _ => Verdict::UnknownAtBudget,
    }
}

impl<'a> Engine<'a> {
    pub(crate) fn new(m: &'a MonoidPresentation, budget: Budget) -> Result<Self> {
        Engine::with_used(m, budget, Rc::default(), Rc::default())
    }

    fn with_used(
        m: &'a MonoidPresentation,
        budget: Budget,
        used: Rc<Cell<BudgetUsed>>,
        cap_hit: Rc<Cell<bool>>,
    ) -> Result<Self> {
        let shape = match m {
            MonoidPresentation::FgPuiseux { generators } => Shape::Fg(FgEngine::from_generators(generators)?),
            MonoidPresentation::Family(FamilyRule::Grams) => Shape::Grams,
            MonoidPresentation::Family(FamilyRule::PrimesSquared) => Shape::PrimesSquared,
            MonoidPresentation::Family(rule @ FamilyRule::Custom(c)) => {
                rule.window(budget.truncation_index)?;
                if !c.is_infinite() {
                    Shape::Fg(FgEngine::from_generators(c.prefix())?)
                } else if c.is_halving() {
                    Shape::Halving(c.generator(1).expect("infinite family"))
                } else {
                    Shape::Open(c)
                }
            }
            MonoidPresentation::ThresholdUnion { base, theta } => Shape::Threshold {
                base: Box::new(Engine::with_used(base, budget, used.clone(), cap_hit.clone())?),
                theta,
            },
            MonoidPresentation::QuadrantUnion => {
                return Err(Error::InvalidArgument(
                    "the quadrant union is not a submonoid of Q>=0".into(),
                ))
            }
        };
        Ok(Engine {
            shape,
            budget,
            used,
            cap_hit,
            atom_cache: RefCell::new(HashMap::new()),
        })
    }

    pub(crate) fn used(&self) -> BudgetUsed {
        self.used.get()
    }

    fn record(&self, truncation: usize, stats: &EnumStats) {
        let mut u = self.used.get();
        u.absorb(BudgetUsed {
            truncation_index: truncation,
            coefficient_bound: stats.max_coefficient,
            enumeration_count: stats.nodes,
        });
        self.used.set(u);
        if stats.cap_hit {
            self.cap_hit.set(true);
        }
    }

    pub(crate) fn cap_hit(&self) -> bool {
        self.cap_hit.get()
    }

    fn record_window(&self, truncation: usize) {
        self.record(truncation, &EnumStats::default());
    }

    fn base_shape(&self) -> BaseShape<'_> {
        match &self.shape {
            Shape::Threshold { base, .. } => match &base.shape {
                Shape::Fg(e) => BaseShape::Finite(e),
                Shape::Grams | Shape::PrimesSquared | Shape::Halving(_) => BaseShape::Dense,
                _ => BaseShape::Other,
            },
            _ => BaseShape::Other,
        }
    }

    fn window_generators(&self) -> Result<Vec<Rational>> {
        let t = self.budget.truncation_index;
        Ok(match &self.shape {
            Shape::Fg(e) => e.atoms().to_vec(),
            Shape::Grams => {
                self.record_window(t);
                FamilyRule::Grams.window(t)?.into_iter().map(|(_, a)| a).collect()
            }
            Shape::PrimesSquared => {
                self.record_window(t);
                FamilyRule::PrimesSquared.window(t)?.into_iter().map(|(_, a)| a).collect()
            }
            Shape::Halving(a1) => {
                self.record_window(t);
                let mut out = vec![a1.clone()];
                for _ in 1..t {
                    let next = out.last().expect("nonempty").half();
                    out.push(next);
                }
                out
            }
            Shape::Open(c) => {
                self.record_window(t);
                (1..=t).filter_map(|n| c.generator(n)).collect()
            }
            Shape::Threshold { base, theta } => {
                let mut out = base.window_generators()?;
                out.push((*theta).clone());
                out
            }
        })
    }

    fn open_engine(&self, c: &CustomFamily) -> Result<FgEngine> {
        let t = self.budget.truncation_index;
        self.record_window(t);
        let gens: Vec<Rational> = (1..=t).filter_map(|n| c.generator(n)).collect();
        FgEngine::from_generators(&gens)
    }

    // ---- membership and divisibility -------------------------------------

    pub(crate) fn member(&self, q: &Rational) -> Result<Member> {
        let found = |z: Option<Factorization>| Member {
            verdict: Verdict::from_bool(z.is_some()),
            combination: z,
        };
        if q.is_zero() {
            return Ok(found(Some(Factorization::new())));
        }
        Ok(match &self.shape {
            Shape::Fg(e) => found(e.representation(q)?),
            Shape::Grams => found(family::grams_form(q)?.map(|f| f.representation())),
            Shape::PrimesSquared => found(family::ps_engine(q)?.representation(q)?),
            Shape::Halving(a1) => found(halving_combination(a1, q)),
            Shape::Open(c) => match self.open_engine(c)?.representation(q)? {
                Some(z) => found(Some(z)),
                None => Member {
                    verdict: Verdict::UnknownAtBudget,
                    combination: None,
                },
            },
            Shape::Threshold { base, theta } => {
                if q >= *theta {
                    Member {
                        verdict: Verdict::Yes,
                        combination: None,
                    }
                } else {
                    base.member(q)?
                }
            }
        })
    }

    pub(crate) fn divides(&self, d: &Rational, q: &Rational) -> Result<(Verdict, Member, Option<Member>)> {
        let md = self.member(d)?;
        if md.verdict.is_no() {
            return Ok((Verdict::No, md, None));
        }
        let Some(rest) = q.checked_sub(d) else {
            return Ok((Verdict::No, md, None));
        };
        let mr = self.member(&rest)?;
        Ok((meet(md.verdict, mr.verdict), md, Some(mr)))
    }

    fn divides_verdict(&self, d: &Rational, q: &Rational) -> Result<Verdict> {
        Ok(self.divides(d, q)?.0)
    }

    /// Whether some nonzero member is `<= x`, with one such member.
    fn nonzero_member_at_most(&self, x: &Rational) -> Result<(Verdict, Option<Rational>)> {
        if x.is_zero() {
            return Ok((Verdict::No, None));
        }
        let scan = |f: &dyn Fn(usize) -> Result<Rational>| -> Result<(Verdict, Option<Rational>)> {
            for n in 1..=MAX_SCAN {
                let a = f(n)?;
                if &a <= x {
                    return Ok((Verdict::Yes, Some(a)));
                }
            }
            Err(Error::TooLarge(format!("no generator below {x} within {MAX_SCAN} indices")))
        };
        match &self.shape {
            Shape::Fg(e) => Ok(match e.atoms().first() {
                Some(a) if a <= x => (Verdict::Yes, Some(a.clone())),
                _ => (Verdict::No, None),
            }),
            Shape::Grams => scan(&|n| Ok(family::grams_atom(n))),
            Shape::PrimesSquared => scan(&|n| Ok(FamilyRule::PrimesSquared.generator(n)?.expect("infinite"))),
            Shape::Halving(a1) => {
                let mut a = a1.clone();
                while &a > x {
                    a = a.half();
                }
                Ok((Verdict::Yes, Some(a)))
            }
            Shape::Open(_) => Ok(match self.window_generators()?.into_iter().min() {
                Some(a) if &a <= x => (Verdict::Yes, Some(a)),
                _ => (Verdict::UnknownAtBudget, None),
            }),
            Shape::Threshold { base, theta } => {
                let (v, w) = base.nonzero_member_at_most(x)?;
                if v.is_yes() {
                    Ok((v, w))
                } else if *theta <= x {
                    Ok((Verdict::Yes, Some((*theta).clone())))
                } else {
                    Ok((v, w))
                }
            }
        }
    }

    // ---- atoms ------------------------------------------------------------

    /// Decides whether the nonzero member `q` is an atom.
    pub(crate) fn is_atom(&self, q: &Rational) -> Result<AtomAnswer> {
        Ok(match &self.shape {
            Shape::Fg(e) => {
                if e.atoms().contains(q) {
                    AtomAnswer::yes()
                } else {
                    let z = e.representation(q)?.ok_or_else(|| not_member(q))?;
                    let (u, v) = split_of(&z, q);
                    AtomAnswer::split(u, v)
                }
            }
            Shape::Grams => {
                let form = family::grams_form(q)?.ok_or_else(|| not_member(q))?;
                if family::grams_generator_index(q).is_some() {
                    AtomAnswer::yes()
                } else {
                    let (u, v) = split_of(&form.representation(), q);
                    AtomAnswer::split(u, v)
                }
            }
            Shape::PrimesSquared => {
                if family::ps_generator_index(q).is_some() {
                    AtomAnswer::yes()
                } else {
                    let z = family::ps_engine(q)?.representation(q)?.ok_or_else(|| not_member(q))?;
                    let (u, v) = split_of(&z, q);
                    AtomAnswer::split(u, v)
                }
            }
            Shape::Halving(_) => AtomAnswer::split(q.half(), q.half()),
            Shape::Open(c) => match self.open_engine(c)?.representation(q)? {
                Some(z) if z.len() >= 2 => {
                    let (u, v) = split_of(&z, q);
                    AtomAnswer::split(u, v)
                }
                _ => AtomAnswer::unknown(),
            },
            Shape::Threshold { base, theta } => {
                if let Some(&v) = self.atom_cache.borrow().get(q) {
                    if v.is_yes() {
                        return Ok(AtomAnswer::yes());
                    }
                }
                let ans = threshold_is_atom(base, theta, q)?;
                self.atom_cache.borrow_mut().insert(q.clone(), ans.verdict);
                ans
            }
        })
    }

    fn atom_verdict(&self, q: &Rational) -> Result<Verdict> {
        if let Some(&v) = self.atom_cache.borrow().get(q) {
            return Ok(v);
        }
        let v = self.is_atom(q)?.verdict;
        self.atom_cache.borrow_mut().insert(q.clone(), v);
        Ok(v)
    }

    /// Upper end (exclusive) of the interval of atoms at or above the threshold.
    fn threshold_atom_bound(&self) -> Option<Rational> {
        match (&self.shape, self.base_shape()) {
            (Shape::Threshold { theta, .. }, BaseShape::Finite(e)) => {
                let two = theta.mul_int(2);
                Some(match e.atoms().first() {
                    Some(m0) => (*theta + m0).min(two),
                    None => two,
                })
            }
            _ => None,
        }
    }

    fn sample_depth(&self) -> usize {
        self.budget.truncation_index.min(MAX_SAMPLE_DEPTH)
    }

    fn sample_cap(&self) -> usize {
        (1usize << self.sample_depth()) + 1
    }

    pub(crate) fn atoms_up_to(&self, cutoff: Option<&Rational>) -> Result<Listing<Rational>> {
        let keep = |a: &Rational| cutoff.is_none_or(|c| a <= c);
        match &self.shape {
            Shape::Fg(e) => Ok(Listing::exact(e.atoms().iter().filter(|a| keep(a)).cloned().collect())),
            Shape::Grams | Shape::PrimesSquared => {
                let mut atoms: Vec<Rational> = self.window_generators()?.into_iter().filter(keep).collect();
                atoms.sort();
                Ok(Listing::exact(atoms))
            }
            Shape::Halving(_) => Ok(Listing::exact(Vec::new())),
            Shape::Open(_) => {
                let mut out = Listing::partial(Vec::new());
                for g in self.window_generators()?.into_iter().filter(keep) {
                    match self.is_atom(&g)?.verdict {
                        Verdict::Yes => out.items.push(g),
                        Verdict::No => {}
                        Verdict::UnknownAtBudget => out.undecided.push(g),
                    }
                }
                out.items.sort();
                out.undecided.sort();
                Ok(out)
            }
            Shape::Threshold { base, theta } => {
                let from_base = base.atoms_up_to(cutoff)?;
                let mut out = Listing {
                    items: Vec::new(),
                    exact: from_base.exact,
                    cap_hit: from_base.cap_hit,
                    undecided: from_base.undecided.clone(),
                };
                let mut candidates = from_base.items;
                match self.base_shape() {
                    BaseShape::Finite(_) => {
                        let hi = self.threshold_atom_bound().expect("finite base");
                        let top = match cutoff {
                            Some(c) if c < &hi => {
                                if c >= *theta {
                                    out.exact = false;
                                }
                                c.clone()
                            }
                            _ => {
                                out.exact = false;
                                hi.clone()
                            }
                        };
                        if top >= **theta {
                            let include_top = top < hi;
                            candidates.extend(threshold::interval_samples(
                                theta,
                                &top,
                                true,
                                include_top,
                                self.sample_depth(),
                                self.sample_cap(),
                            ));
                        }
                    }
                    BaseShape::Dense => {
                        if keep(theta) {
                            candidates.push((*theta).clone());
                        }
                    }
                    BaseShape::Other => {
                        out.exact = false;
                        if keep(theta) {
                            candidates.push((*theta).clone());
                        }
                    }
                }
                for a in candidates {
                    match self.atom_verdict(&a)? {
                        Verdict::Yes => out.items.push(a),
                        Verdict::No => {}
                        Verdict::UnknownAtBudget => {
                            out.exact = false;
                            out.undecided.push(a);
                        }
                    }
                }
                out.items.sort();
                out.items.dedup();
                out.undecided.sort();
                if !out.undecided.is_empty() {
                    out.exact = false;
                }
                Ok(out)
            }
        }
    }

    // ---- factorizations ---------------------------------------------------

    /// Streams the factorizations of the member `q`.
    pub(crate) fn for_each_factorization(
        &self,
        q: &Rational,
        visit: &mut dyn FnMut(Factorization) -> ControlFlow<()>,
    ) -> Result<StreamEnd> {
        let cap = self.budget.enumeration_cap;
        if q.is_zero() {
            let _ = visit(Factorization::new());
            return Ok(StreamEnd { exact: true });
        }
        match &self.shape {
            Shape::Fg(e) => {
                let stats = e.for_each_factorization(q, cap, &mut *visit)?;
                self.record(0, &stats);
                Ok(StreamEnd { exact: !stats.cap_hit })
            }
            Shape::Grams => {
                let Some(form) = family::grams_form(q)? else {
                    return Ok(StreamEnd { exact: true });
                };
                let window = form.window(self.budget.truncation_index);
                let stats = family::grams_for_each_factorization(&form, window, cap, &mut *visit)?;
                self.record(window, &stats);
                Ok(StreamEnd {
                    exact: form.remainder.is_zero() && !stats.cap_hit,
                })
            }
            Shape::PrimesSquared => {
                let e = family::ps_engine(q)?;
                let stats = e.for_each_factorization(q, cap, &mut *visit)?;
                self.record(e.atoms().len(), &stats);
                Ok(StreamEnd { exact: !stats.cap_hit })
            }
            Shape::Halving(_) => Ok(StreamEnd { exact: true }),
            Shape::Open(_) => Ok(StreamEnd { exact: false }),
            Shape::Threshold { base, theta } => match self.base_shape() {
                BaseShape::Finite(e) => self.threshold_finite_factorizations(e, theta, q, visit),
                BaseShape::Dense => self.threshold_dense_factorizations(base, theta, q, visit),
                BaseShape::Other => Ok(StreamEnd { exact: false }),
            },
        }
    }

    fn threshold_finite_factorizations(
        &self,
        base: &FgEngine,
        theta: &Rational,
        q: &Rational,
        visit: &mut dyn FnMut(Factorization) -> ControlFlow<()>,
    ) -> Result<StreamEnd> {
        let mut candidates: BTreeSet<Rational> = BTreeSet::new();
        for a in base.atoms().iter().filter(|a| *a <= q) {
            if self.atom_verdict(a)?.is_yes() {
                candidates.insert(a.clone());
            }
        }
        if let Some(room) = q.checked_sub(theta) {
            // at most one part is >= theta when q < 2 theta
            for s in base.elements_up_to(&room)? {
                let y = q.checked_sub(&s).expect("s <= q");
                if self.atom_verdict(&y)?.is_yes() {
                    candidates.insert(y);
                }
            }
            let hi = self.threshold_atom_bound().expect("finite base");
            let top = hi.clone().min(room);
            if top >= *theta {
                let depth = self.budget.truncation_index.min(MAX_GRID_DEPTH);
                for y in threshold::interval_samples(theta, &top, true, top < hi, depth, usize::MAX) {
                    if self.atom_verdict(&y)?.is_yes() {
                        candidates.insert(y);
                    }
                }
            }
        }
        let engine = FgEngine::from_atoms(candidates.into_iter().collect())?;
        let stats = engine.for_each_factorization(q, self.budget.enumeration_cap, &mut *visit)?;
        self.record(0, &stats);
        let complete = q < &theta.mul_int(2);
        Ok(StreamEnd {
            exact: complete && !stats.cap_hit,
        })
    }

    fn threshold_dense_factorizations(
        &self,
        base: &Engine<'a>,
        theta: &Rational,
        q: &Rational,
        visit: &mut dyn FnMut(Factorization) -> ControlFlow<()>,
    ) -> Result<StreamEnd> {
        // every atom other than theta lies below theta, hence in the base
        let theta_atom = self.atom_verdict(theta)?;
        let mut exact = true;
        let mut k = 0u64;
        let mut stopped = false;
        while let Some(rest) = q.checked_sub(&theta.mul_int(k)) {
            if k >= 1 && !theta_atom.is_yes() {
                exact &= theta_atom.is_no();
                break;
            }
            let in_base = base.member(&rest)?.verdict;
            if in_base.is_yes() {
                let mut failure: Option<Error> = None;
                let end = base.for_each_factorization(&rest, &mut |z| {
                    let mut ok = true;
                    for (a, _) in z.parts() {
                        let a = a.as_rational().expect("rational atom");
                        match self.atom_verdict(a) {
                            Ok(Verdict::Yes) => {}
                            Ok(Verdict::No) => ok = false,
                            Ok(Verdict::UnknownAtBudget) => {
                                exact = false;
                                ok = false;
                            }
                            Err(e) => {
                                failure = Some(e);
                                return ControlFlow::Break(());
                            }
                        }
                    }
                    if !ok {
                        return ControlFlow::Continue(());
                    }
                    let mut full = z;
                    full.add(Element::Rat(theta.clone()), k);
                    let flow = visit(full);
                    if flow.is_break() {
                        stopped = true;
                    }
                    flow
                })?;
                if let Some(e) = failure {
                    return Err(e);
                }
                exact &= end.exact;
                if stopped {
                    break;
                }
            } else if !in_base.is_no() {
                exact = false;
            }
            k += 1;
        }
        Ok(StreamEnd { exact })
    }

    pub(crate) fn factorizations(&self, q: &Rational) -> Result<Listing<Factorization>> {
        let mut items = Vec::new();
        let end = self.for_each_factorization(q, &mut |z| {
            items.push(z);
            ControlFlow::Continue(())
        })?;
        items.sort();
        let mut out = if end.exact {
            Listing::exact(items)
        } else {
            Listing::partial(items)
        };
        out.cap_hit = self.cap_hit();
        Ok(out)
    }

    /// Lengths of the nonempty factorizations of `q`.
    pub(crate) fn length_set(&self, q: &Rational) -> Result<Listing<u64>> {
        let mut lengths = BTreeSet::new();
        let end = self.for_each_factorization(q, &mut |z| {
            if !z.is_empty() {
                lengths.insert(z.len());
            }
            ControlFlow::Continue(())
        })?;
        let items: Vec<u64> = lengths.into_iter().collect();
        let mut out = if end.exact {
            Listing::exact(items)
        } else {
            Listing::partial(items)
        };
        out.cap_hit = self.cap_hit();
        Ok(out)
    }

    // ---- divisors ---------------------------------------------------------

    /// Divisors of the member `q`.
    pub(crate) fn divisors(&self, q: &Rational) -> Result<Listing<Rational>> {
        if q.is_zero() {
            return Ok(Listing::exact(vec![Rational::zero()]));
        }
        match &self.shape {
            Shape::Fg(e) => Ok(Listing::exact(e.divisors(q)?)),
            Shape::PrimesSquared => Ok(Listing::exact(family::ps_engine(q)?.divisors(q)?)),
            Shape::Grams => self.grams_divisors(q),
            Shape::Halving(_) => Ok(Listing::partial(threshold::interval_samples(
                &Rational::zero(),
                q,
                true,
                true,
                self.sample_depth(),
                self.sample_cap(),
            ))),
            Shape::Open(c) => Ok(Listing::partial(self.open_engine(c)?.divisors(q)?)),
            Shape::Threshold { base, theta } => match self.base_shape() {
                BaseShape::Finite(e) => {
                    let region = threshold::divisor_region(e, theta, q)?;
                    Ok(self.region_listing(&region))
                }
                _ => self.threshold_generic_divisors(base, theta, q),
            },
        }
    }

    fn grams_divisors(&self, q: &Rational) -> Result<Listing<Rational>> {
        let form = family::grams_form(q)?.ok_or_else(|| not_member(q))?;
        let cap = self.budget.enumeration_cap;
        let mut found: BTreeSet<Rational> = BTreeSet::new();
        let mut work = 0u64;
        let mut truncated = false;
        let window = form.window(self.budget.truncation_index);
        // sums run over numerators against the common denominator of the window
        let atoms: Vec<Rational> = (1..=window).map(family::grams_atom).collect();
        let common = Rational::common_denominator(&atoms);
        let scaled: HashMap<Rational, u128> = atoms
            .iter()
            .map(|a| {
                let n = num_traits::ToPrimitive::to_u128(&(&common / a.denom()))
                    .ok_or_else(|| Error::TooLarge(format!("generator window {window} is beyond the desk-scale limit")))?;
                Ok((a.clone(), n))
            })
            .collect::<Result<_>>()?;
        let mut sums: BTreeSet<u128> = BTreeSet::new();
        let stats = family::grams_for_each_factorization(&form, window, cap, |z| {
            let parts: Vec<(u128, u64)> = z
                .parts()
                .map(|(a, m)| (scaled[a.as_rational().expect("rational")], m))
                .collect();
            let mut sub = vec![0u64; parts.len()];
            loop {
                work += 1;
                if work > cap {
                    truncated = true;
                    return ControlFlow::Break(());
                }
                sums.insert(parts.iter().zip(&sub).map(|((a, _), &c)| a * u128::from(c)).sum());
                if sums.len() >= MAX_DIVISORS {
                    truncated = true;
                    return ControlFlow::Break(());
                }
                // odometer over 0..=mult
                let mut i = 0;
                while i < parts.len() && sub[i] == parts[i].1 {
                    sub[i] = 0;
                    i += 1;
                }
                if i == parts.len() {
                    break;
                }
                sub[i] += 1;
            }
            ControlFlow::Continue(())
        })?;
        for n in sums {
            found.insert(Rational::from_parts(n.into(), common.clone())?);
        }
        self.record(window, &stats);
        let exact = form.remainder.is_zero() && !truncated && !stats.cap_hit;
        let mut out = if exact {
            Listing::exact(found.into_iter().collect())
        } else {
            Listing::partial(found.into_iter().collect())
        };
        out.cap_hit = truncated || stats.cap_hit;
        Ok(out)
    }

    fn region_listing(&self, region: &Region) -> Listing<Rational> {
        let mut items: BTreeSet<Rational> = region.points.clone();
        if let Some((lo, hi)) = &region.interval {
            items.extend(threshold::interval_samples(lo, hi, true, true, self.sample_depth(), self.sample_cap()));
        }
        let items: Vec<Rational> = items.into_iter().collect();
        if region.is_finite() {
            Listing::exact(items)
        } else {
            Listing::partial(items)
        }
    }

    fn threshold_generic_divisors(&self, base: &Engine<'a>, theta: &Rational, q: &Rational) -> Result<Listing<Rational>> {
        let mut candidates: BTreeSet<Rational> = [Rational::zero(), q.clone()].into_iter().collect();
        let mut base_exact = false;
        if base.member(q)?.verdict.is_yes() {
            let d = base.divisors(q)?;
            base_exact = d.exact;
            if d.exact || d.items.len() <= self.sample_cap() {
                candidates.extend(d.items);
            } else {
                // an evenly spaced selection of a partial listing
                let step = d.items.len().div_ceil(self.sample_cap());
                candidates.extend(d.items.into_iter().step_by(step));
            }
        }
        for g in base.window_generators()? {
            if &g <= q {
                candidates.insert(g);
            }
        }
        if let Some(room) = q.checked_sub(theta) {
            if room >= *theta {
                candidates.extend(threshold::interval_samples(theta, &room, true, true, self.sample_depth(), self.sample_cap()));
            }
        }
        let mirrored: Vec<Rational> = candidates.iter().filter_map(|c| q.checked_sub(c)).collect();
        candidates.extend(mirrored);
        let mut out = Listing::partial(Vec::new());
        for c in candidates {
            match self.divides_verdict(&c, q)? {
                Verdict::Yes => out.items.push(c),
                Verdict::No => {}
                Verdict::UnknownAtBudget => out.undecided.push(c),
            }
        }
        out.exact = q < theta && base_exact && out.undecided.is_empty();
        Ok(out)
    }

    pub(crate) fn atom_divisors(&self, q: &Rational) -> Result<Listing<Rational>> {
        if q.is_zero() {
            return Ok(Listing::exact(Vec::new()));
        }
        let limit = self.budget.witness_limit;
        // candidates in stream order, and whether they cover every atom divisor
        let (candidates, complete): (Vec<Rational>, bool) = match &self.shape {
            Shape::Fg(e) => (e.atoms().to_vec(), true),
            Shape::PrimesSquared => (family::ps_relevant_atoms(q)?.into_iter().map(|(_, a)| a).collect(), true),
            Shape::Grams => {
                let form = family::grams_form(q)?.ok_or_else(|| not_member(q))?;
                if form.remainder.is_zero() {
                    (form.residues.keys().map(|&n| family::grams_atom(n)).collect(), true)
                } else {
                    let window = form.window(self.budget.truncation_index);
                    self.record_window(window);
                    ((1..=window).map(family::grams_atom).collect(), false)
                }
            }
            Shape::Halving(_) => (Vec::new(), true),
            Shape::Open(_) => (self.window_generators()?, false),
            Shape::Threshold { base, theta } => match self.base_shape() {
                BaseShape::Finite(e) => {
                    let mut c: Vec<Rational> = e.atoms().to_vec();
                    let mut complete = true;
                    if let Some(room) = q.checked_sub(theta) {
                        for s in e.elements_up_to(&room)? {
                            c.push(q.checked_sub(&s).expect("s <= q"));
                        }
                        let hi = self.threshold_atom_bound().expect("finite base");
                        let top = hi.clone().min(room);
                        if top >= **theta {
                            complete = top == **theta;
                            c.extend(threshold::interval_samples(theta, &top, true, top < hi, self.sample_depth(), self.sample_cap()));
                        }
                    }
                    (c, complete)
                }
                BaseShape::Dense => {
                    let mut c = base.window_generators()?;
                    c.push((*theta).clone());
                    let complete = q < *theta && base.atom_divisors(q)?.exact;
                    (c, complete)
                }
                BaseShape::Other => {
                    let mut c = base.window_generators()?;
                    c.push((*theta).clone());
                    (c, false)
                }
            },
        };
        let mut out = if complete {
            Listing::exact(Vec::new())
        } else {
            Listing::partial(Vec::new())
        };
        let mut seen = BTreeSet::new();
        for a in candidates {
            if &a > q || !seen.insert(a.clone()) {
                continue;
            }
            if out.items.len() >= limit {
                out.exact = false;
                break;
            }
            let atom = self.atom_verdict_any(&a)?;
            let div = if atom.is_no() { Verdict::No } else { self.divides_verdict(&a, q)? };
            match meet(atom, div) {
                Verdict::Yes => out.items.push(a),
                Verdict::No => {}
                Verdict::UnknownAtBudget => {
                    out.exact = false;
                    out.undecided.push(a);
                }
            }
        }
        out.items.sort();
        out.undecided.sort();
        Ok(out)
    }

    /// `is_atom` for a candidate that may not be a member.
    fn atom_verdict_any(&self, a: &Rational) -> Result<Verdict> {
        if a.is_zero() {
            return Ok(Verdict::No);
        }
        match self.member(a)?.verdict {
            Verdict::Yes => self.atom_verdict(a),
            v => Ok(v),
        }
    }

    // ---- common divisors and MCDs -----------------------------------------

    /// Common divisors in generation order, plus exactness.
    fn common_divisor_candidates(&self, set: &[Rational]) -> Result<Listing<Rational>> {
        if let (Shape::Threshold { theta, .. }, BaseShape::Finite(e)) = (&self.shape, self.base_shape()) {
            let region = threshold::common_divisor_region(e, theta, set)?;
            let mut items: Vec<Rational> = region.points.iter().cloned().collect();
            if let Some((lo, hi)) = &region.interval {
                items.extend(threshold::interval_samples(lo, hi, true, true, self.sample_depth(), self.sample_cap()));
            }
            return Ok(if region.is_finite() {
                Listing::exact(items)
            } else {
                Listing::partial(items)
            });
        }
        let smallest = set.iter().min().expect("nonempty set");
        let first = self.divisors(smallest)?;
        let mut out = Listing {
            items: Vec::new(),
            exact: first.exact,
            cap_hit: first.cap_hit,
            undecided: Vec::new(),
        };
        'cand: for d in first.items.into_iter().chain(first.undecided) {
            let mut verdict = Verdict::Yes;
            for s in set {
                verdict = meet(verdict, self.divides_verdict(&d, s)?);
                if verdict.is_no() {
                    continue 'cand;
                }
            }
            if verdict.is_yes() {
                out.items.push(d);
            } else {
                out.undecided.push(d);
            }
        }
        if !out.undecided.is_empty() {
            out.exact = false;
        }
        Ok(out)
    }

    pub(crate) fn common_divisors(&self, set: &[Rational]) -> Result<Listing<Rational>> {
        let mut out = self.common_divisor_candidates(set)?;
        out.items.sort();
        out.items.dedup();
        out.undecided.sort();
        Ok(out)
    }

    /// Whether the set has a common divisor other than zero.
    pub(crate) fn has_nonzero_common_divisor(&self, set: &[Rational]) -> Result<Verdict> {
        if set.iter().any(Rational::is_zero) {
            return Ok(Verdict::No);
        }
        if set.iter().all(|s| s == &set[0]) {
            return Ok(Verdict::Yes);
        }
        if let (Shape::Threshold { theta, .. }, BaseShape::Finite(e)) = (&self.shape, self.base_shape()) {
            let region = threshold::common_divisor_region(e, theta, set)?;
            return Ok(Verdict::from_bool(region.has_nonzero()));
        }
        // an atom's only nonzero divisor is itself
        let mut sorted = set.to_vec();
        sorted.sort();
        for a in &sorted {
            if self.atom_verdict(a)?.is_yes() {
                let mut v = Verdict::Yes;
                for s in &sorted {
                    v = meet(v, self.divides_verdict(a, s)?);
                }
                return Ok(v);
            }
        }
        // one nonzero common divisor settles it; try the small generators first
        'gen: for g in self.window_generators()? {
            for s in &sorted {
                if !self.divides_verdict(&g, s)?.is_yes() {
                    continue 'gen;
                }
            }
            return Ok(Verdict::Yes);
        }
        let cd = self.common_divisor_candidates(set)?;
        if cd.items.iter().any(|d| !d.is_zero()) {
            Ok(Verdict::Yes)
        } else if cd.exact {
            Ok(Verdict::No)
        } else {
            Ok(Verdict::UnknownAtBudget)
        }
    }

    pub(crate) fn mcds(&self, set: &[Rational]) -> Result<Listing<Rational>> {
        let cd = self.common_divisor_candidates(set)?;
        let mut out = Listing {
            items: Vec::new(),
            exact: cd.exact,
            cap_hit: cd.cap_hit,
            undecided: Vec::new(),
        };
        for d in cd.items {
            if !cd.exact && out.items.len() >= self.budget.witness_limit {
                break;
            }
            let shifted: Vec<Rational> = set
                .iter()
                .map(|s| s.checked_sub(&d).expect("common divisor is below every element"))
                .collect();
            match self.has_nonzero_common_divisor(&shifted)? {
                Verdict::No => out.items.push(d),
                Verdict::Yes => {}
                Verdict::UnknownAtBudget => out.undecided.push(d),
            }
        }
        for d in cd.undecided {
            out.undecided.push(d);
        }
        if !out.undecided.is_empty() {
            out.exact = false;
        }
        out.items.sort();
        out.items.dedup();
        out.undecided.sort();
        Ok(out)
    }

    // ---- structural facts used by the probes ------------------------------

    pub(crate) fn structure(&self) -> Structure {
        match &self.shape {
            Shape::Fg(e) if e.atoms().is_empty() => Structure::Trivial,
            Shape::Fg(_) => Structure::FinitelyGenerated,
            Shape::Grams => Structure::Grams,
            Shape::PrimesSquared => Structure::PrimesSquared,
            Shape::Halving(a1) => Structure::Halving(a1.clone()),
            Shape::Open(_) => Structure::Open,
            Shape::Threshold { base, theta } => {
                let base = match self.base_shape() {
                    BaseShape::Finite(e) => ThresholdBase::Discrete(e.atoms().first().cloned()),
                    BaseShape::Dense => match &base.shape {
                        Shape::Grams => ThresholdBase::Grams,
                        Shape::PrimesSquared => ThresholdBase::PrimesSquared,
                        _ => ThresholdBase::Halving,
                    },
                    BaseShape::Other => ThresholdBase::Other,
                };
                Structure::Threshold {
                    base,
                    theta: (*theta).clone(),
                }
            }
        }
    }
}

/// What the probes need to know about a presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Structure {
    Trivial,
    FinitelyGenerated,
    Grams,
    PrimesSquared,
    Halving(Rational),
    Open,
    Threshold { base: ThresholdBase, theta: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum ThresholdBase {
    /// Finitely generated; carries the smallest atom (none for the trivial base).
    Discrete(Option<Rational>),
    Grams,
    PrimesSquared,
    Halving,
    Other,
}

fn not_member(q: &Rational) -> Error {
    Error::Domain(format!("{q} is not a member of the monoid"))
}

fn threshold_is_atom(base: &Engine<'_>, theta: &Rational, q: &Rational) -> Result<AtomAnswer> {
    let two_theta = theta.mul_int(2);
    if q >= &two_theta {
        return Ok(AtomAnswer::split(theta.clone(), q.checked_sub(theta).expect("q >= theta")));
    }
    if let Some(room) = q.checked_sub(theta) {
        // q in [theta, 2 theta): a split needs a nonzero member v <= q - theta
        // (the other part is then >= theta)
        match base.nonzero_member_at_most(&room)? {
            (Verdict::Yes, Some(v)) => {
                let rest = q.checked_sub(&v).expect("v <= q");
                return Ok(AtomAnswer::split(v, rest));
            }
            (Verdict::UnknownAtBudget, _) => return Ok(AtomAnswer::unknown()),
            _ => {}
        }
    }
    // both parts of any split lie below theta, so they are base members
    match base.member(q)?.verdict {
        Verdict::Yes => base.is_atom(q),
        Verdict::No => Ok(AtomAnswer::yes()),
        Verdict::UnknownAtBudget => Ok(AtomAnswer::unknown()),
    }
}

/// `q` as a multiple of `a_1 / 2^k`, if `q / a_1` is dyadic.
fn halving_combination(a1: &Rational, q: &Rational) -> Option<Factorization> {
    let ratio = q.div(a1)?;
    let d = ratio.denom();
    let bits = d.bits();
    if d.magnitude().count_ones() != 1 {
        return None;
    }
    let k = bits - 1;
    let atom = Rational::from_parts(a1.numer().clone(), a1.denom() << k).ok()?;
    let copies = num_traits::ToPrimitive::to_u64(ratio.numer())?;
    let mut z = Factorization::new();
    z.add(Element::Rat(atom), copies);
    Some(z)
}

/// Factorizations of a Grams element with the dyadic remainder placed on a single index.
pub(crate) fn grams_pure_factorizations(
    form: &GramsForm,
    truncation: usize,
    count: usize,
) -> Result<Vec<(u64, Factorization)>> {
    let window = form.window(truncation);
    let start = form.window(1);
    let mut out = Vec::new();
    for n in start..=window {
        if out.len() >= count {
            break;
        }
        let p = crate::numtheory::nth_prime(crate::numtheory::PrimeKind::OddPrimes, n)?;
        let scaled = form.remainder.mul_int(1u64 << n);
        let Some(units) = num_traits::ToPrimitive::to_u64(scaled.numer()).filter(|_| scaled.is_integer()) else {
            continue;
        };
        let mut z = Factorization::new();
        for (&m, &r) in &form.residues {
            z.add(Element::Rat(family::grams_atom(m)), r);
        }
        z.add(Element::Rat(family::grams_atom(n)), units * p);
        out.push((z.len(), z));
    }
    Ok(out)
}
