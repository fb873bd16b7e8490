//! Exact procedures for the two infinite generator families with certified
//! atom sets.
//!
//! Grams' family `a_n = 1/(2^n p_n)` (odd primes): the `p_n`-adic valuation of
//! `sum c_m a_m` only sees the `n`-th term, so `c_n` is pinned modulo `p_n` by
//! the target. Taking the least residues leaves a dyadic remainder that any
//! deeper generators can absorb, which turns membership into a closed form and
//! factorization into a binary-partition enumeration.
//!
//! Primes-squared family `a_n = (p_n+1)/p_n^2` (all primes): if `a_n` appears
//! in a representation of `q` and `p_n` does not divide the denominator of `q`,
//! then `p_n^2` divides its coefficient, forcing `p_n + 1 <= q`. Only finitely
//! many generators can therefore occur, and the finitely generated engine
//! answers exactly.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::fg::FgEngine;
use super::kernel::{self, EnumStats};
use super::presentation::{Element, FamilyRule};
use super::report::Factorization;
use crate::error::{Error, Result};
use crate::numtheory::{factorize, PrimeKind, PrimeSequence, Rational};

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn big_mod(n: &BigInt, p: u64) -> u64 {
    n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn denominator(q: &Rational) -> Result<u64> {
    q.denom_u64()
        .ok_or_else(|| Error::TooLarge(format!("denominator of {q} exceeds 64 bits")))
}

pub(crate) fn grams_atom(n: usize) -> Rational {
    FamilyRule::Grams
        .generator(n)
        .expect("n >= 1")
        .expect("infinite family")
}

/// The forced residues of a member of Grams' monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct GramsForm {
    /// index -> least admissible coefficient (nonzero entries only)
    pub residues: BTreeMap<usize, u64>,
    /// `q - sum residues[n] a_n`; always dyadic
    pub remainder: Rational,
}

impl GramsForm {
    /// Smallest index `W` such that `remainder * 2^W` is an integer.
    fn dyadic_depth(&self) -> usize {
        self.remainder.denom().bits().saturating_sub(1) as usize
    }

    /// Length of the unique factorization when the remainder is zero.
    #[cfg(test)]
    pub(crate) fn forced_length(&self) -> u64 {
        self.residues.values().sum()
    }

    /// Window of generators needed to write `q` at all, widened to `truncation`.
    pub(crate) fn window(&self, truncation: usize) -> usize {
        let forced = self.residues.keys().next_back().copied().unwrap_or(0);
        truncation.max(forced).max(self.dyadic_depth()).max(1)
    }

    pub(crate) fn representation(&self) -> Factorization {
        let mut z = Factorization::new();
        for (&n, &r) in &self.residues {
            z.add(Element::Rat(grams_atom(n)), r);
        }
        if !self.remainder.is_zero() {
            let n = self.dyadic_depth().max(1);
            let p = PrimeSequence::shared(PrimeKind::OddPrimes).nth(n).expect("n >= 1");
            let copies = self.remainder.mul_int(1u64 << n).numer().to_u64().expect("desk scale");
            z.add(Element::Rat(grams_atom(n)), copies * p);
        }
        z
    }
}

/// Decides membership in Grams' monoid; `Some` carries the forced residues.
pub(crate) fn grams_form(q: &Rational) -> Result<Option<GramsForm>> {
    let d = denominator(q)?;
    let twos = d.trailing_zeros();
    let odd = d >> twos;
    let odd_primes = PrimeSequence::shared(PrimeKind::OddPrimes);
    let mut residues = BTreeMap::new();
    let mut forced_sum = Rational::zero();
    for (p, e) in factorize(odd) {
        if e > 1 {
            // v_p(q) <= -2 but every generator has v_p >= -1
            return Ok(None);
        }
        let n = odd_primes.index_of(p).expect("odd prime");
        // r = q * 2^n * p mod p
        let rest = d / p;
        let num = big_mod(q.numer(), p);
        let two_n = pow_mod(2, n as u64, p);
        let inv = pow_mod(rest % p, p - 2, p);
        let r = ((num as u128 * two_n as u128 % p as u128) * inv as u128 % p as u128) as u64;
        debug_assert!(r != 0);
        forced_sum = forced_sum + grams_atom(n).mul_int(r);
        residues.insert(n, r);
    }
    match q.checked_sub(&forced_sum) {
        None => Ok(None),
        Some(remainder) => {
            debug_assert!(remainder.denom().magnitude().count_ones() <= 1, "remainder must be dyadic");
            Ok(Some(GramsForm {
                residues,
                remainder,
            }))
        }
    }
}

/// Index `n` with `q = 1/(2^n p_n)`, if any.
pub(crate) fn grams_generator_index(q: &Rational) -> Option<usize> {
    if !q.numer().is_one() {
        return None;
    }
    let d = q.denom_u64()?;
    let n = d.trailing_zeros() as usize;
    let p = d >> n;
    let idx = PrimeSequence::shared(PrimeKind::OddPrimes).index_of(p)?;
    (idx == n).then_some(n)
}

/// Visits the factorizations of `q` that use generators `1..=window` only.
pub(crate) fn grams_for_each_factorization(
    form: &GramsForm,
    window: usize,
    cap: u64,
    mut visit: impl FnMut(Factorization) -> ControlFlow<()>,
) -> Result<EnumStats> {
    if window > 62 {
        return Err(Error::TooLarge(format!(
            "generator window {window} is beyond the desk-scale limit"
        )));
    }
    let target = kernel::scale(&form.remainder, &(BigInt::one() << window))?
        .expect("window covers the dyadic depth");
    let weights: Vec<u64> = (1..=window).map(|n| 1u64 << (window - n)).collect();
    let odd_primes = PrimeSequence::shared(PrimeKind::OddPrimes);
    let primes: Vec<u64> = (1..=window)
        .map(|n| odd_primes.nth(n))
        .collect::<Result<_>>()?;
    let atoms: Vec<Rational> = (1..=window).map(grams_atom).collect();
    Ok(kernel::enumerate(&weights, target, cap, |extra| {
        let mut z = Factorization::new();
        for (i, &e) in extra.iter().enumerate() {
            let n = i + 1;
            let c = form.residues.get(&n).copied().unwrap_or(0) + primes[i] * e;
            z.add(Element::Rat(atoms[i].clone()), c);
        }
        visit(z)
    }))
}

/// The generators `a_n` that can occur in some representation of `q`.
pub(crate) fn ps_relevant_atoms(q: &Rational) -> Result<Vec<(usize, Rational)>> {
    let d = denominator(q)?;
    let all = PrimeSequence::shared(PrimeKind::AllPrimes);
    let mut primes: Vec<u64> = factorize(d).into_iter().map(|(p, _)| p).collect();
    // p + 1 <= q, i.e. p <= floor(q) - 1
    if let Some(top) = q.floor().to_u64() {
        primes.extend(all.up_to(top.saturating_sub(1)).into_iter().map(|(_, p)| p));
    } else {
        return Err(Error::TooLarge(format!("{q} is beyond the desk-scale limit")));
    }
    primes.sort_unstable();
    primes.dedup();
    primes
        .into_iter()
        .map(|p| {
            let n = all.index_of(p).expect("prime");
            Ok((n, FamilyRule::PrimesSquared.generator(n)?.expect("infinite")))
        })
        .collect()
}

/// The exact engine for the divisor-closed part of the monoid below `q`.
pub(crate) fn ps_engine(q: &Rational) -> Result<FgEngine> {
    FgEngine::from_atoms(ps_relevant_atoms(q)?.into_iter().map(|(_, a)| a).collect())
}

/// Index `n` with `q = (p_n+1)/p_n^2`, if any.
pub(crate) fn ps_generator_index(q: &Rational) -> Option<usize> {
    let d = q.denom_u64()?;
    let p = (d as f64).sqrt().round() as u64;
    if p.checked_mul(p)? != d {
        return None;
    }
    let idx = PrimeSequence::shared(PrimeKind::AllPrimes).index_of(p)?;
    (q.numer() == &BigInt::from(p + 1)).then_some(idx)
}

/// Upper bound `max(d(q), floor q)` on the prime of any generator of
/// `<(p+1)/p^2>` that can divide `q`.
pub fn primes_squared_bound(q: &Rational) -> Result<u64> {
    let d = denominator(q)?;
    let f = q.floor().to_u64().ok_or_else(|| Error::TooLarge(q.to_string()))?;
    Ok(d.max(f))
}
