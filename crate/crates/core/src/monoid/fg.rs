//! Finitely generated submonoids of `Q>=0`.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::kernel::{self, Apery, EnumStats};
use super::presentation::Element;
use super::report::Factorization;
use crate::error::{Error, Result};
use crate::numtheory::Rational;

/// Largest scaled target for which divisor sets are listed by sweeping.
const MAX_SWEEP: u64 = 50_000_000;

/// Exact engine for `<atoms>` where `atoms` is a known minimal generating set.
#[derive(Debug, Clone)]
pub(crate) struct FgEngine {
    /// Ascending.
    atoms: Vec<Rational>,
    unit: BigInt,
    scaled: Vec<u64>,
    apery: Option<Apery>,
}

impl FgEngine {
    /// Builds the engine for a set already known to consist of atoms.
    pub(crate) fn from_atoms(mut atoms: Vec<Rational>) -> Result<Self> {
        atoms.sort();
        atoms.dedup();
        let unit = Rational::common_denominator(&atoms);
        let scaled = atoms
            .iter()
            .map(|a| kernel::scale(a, &unit).map(|v| v.expect("unit clears denominators")))
            .collect::<Result<Vec<_>>>()?;
        let apery = if scaled.is_empty() {
            None
        } else {
            Some(Apery::new(&scaled)?)
        };
        Ok(FgEngine {
            atoms,
            unit,
            scaled,
            apery,
        })
    }

    /// Builds the engine from arbitrary generators, discarding the redundant ones.
    pub(crate) fn from_generators(generators: &[Rational]) -> Result<Self> {
        let mut sorted = generators.to_vec();
        sorted.sort();
        sorted.dedup();
        let mut atoms: Vec<Rational> = Vec::new();
        for g in sorted {
            // every proper decomposition of g uses only generators smaller than g
            let redundant = !atoms.is_empty() && FgEngine::from_atoms(atoms.clone())?.contains(&g)?;
            if !redundant {
                atoms.push(g);
            }
        }
        FgEngine::from_atoms(atoms)
    }

    pub(crate) fn atoms(&self) -> &[Rational] {
        &self.atoms
    }

    fn scale(&self, q: &Rational) -> Result<Option<u64>> {
        kernel::scale(q, &self.unit)
    }

    fn contains_scaled(&self, v: u64) -> bool {
        match &self.apery {
            Some(ap) => ap.contains(v),
            None => v == 0,
        }
    }

    pub(crate) fn contains(&self, q: &Rational) -> Result<bool> {
        Ok(match self.scale(q)? {
            Some(v) => self.contains_scaled(v),
            None => false,
        })
    }

    /// A combination of atoms summing to `q`, if `q` is a member.
    pub(crate) fn representation(&self, q: &Rational) -> Result<Option<Factorization>> {
        let Some(v) = self.scale(q)? else {
            return Ok(None);
        };
        if v == 0 {
            return Ok(Some(Factorization::new()));
        }
        let Some(ap) = &self.apery else {
            return Ok(None);
        };
        Ok(ap.representation(v).map(|coeffs| {
            let mut z = Factorization::new();
            for (a, c) in self.atoms.iter().zip(coeffs) {
                z.add(Element::Rat(a.clone()), c);
            }
            z
        }))
    }

    /// Visits every factorization of `q`, largest atoms first, coefficients
    /// lexicographically decreasing.
    pub(crate) fn for_each_factorization(
        &self,
        q: &Rational,
        cap: u64,
        mut visit: impl FnMut(Factorization) -> ControlFlow<()>,
    ) -> Result<EnumStats> {
        let Some(v) = self.scale(q)? else {
            return Ok(EnumStats {
                nodes: 1,
                ..EnumStats::default()
            });
        };
        if !self.contains_scaled(v) {
            return Ok(EnumStats {
                nodes: 1,
                ..EnumStats::default()
            });
        }
        let desc: Vec<u64> = self.scaled.iter().rev().copied().collect();
        let atoms_desc: Vec<&Rational> = self.atoms.iter().rev().collect();
        Ok(kernel::enumerate(&desc, v, cap, |coeffs| {
            let mut z = Factorization::new();
            for (a, &c) in atoms_desc.iter().zip(coeffs) {
                z.add(Element::Rat((*a).clone()), c);
            }
            visit(z)
        }))
    }

    fn sweep_bound(&self, q: &Rational) -> Result<Option<u64>> {
        let Some(v) = self.scale(q)? else {
            return Ok(None);
        };
        if v > MAX_SWEEP {
            return Err(Error::TooLarge(format!(
                "{q} is too large to list its divisors at desk scale"
            )));
        }
        Ok(Some(v))
    }

    /// All members `<= x`, ascending.
    pub(crate) fn elements_up_to(&self, x: &Rational) -> Result<Vec<Rational>> {
        if self.atoms.is_empty() {
            return Ok(vec![Rational::zero()]);
        }
        let bound = ((x.numer() * &self.unit) / x.denom())
            .to_u64()
            .filter(|&v| v <= MAX_SWEEP)
            .ok_or_else(|| Error::TooLarge(format!("{x} is too large to sweep")))?;
        Ok((0..=bound)
            .filter(|&v| self.contains_scaled(v))
            .map(|v| kernel::unscale(v, &self.unit))
            .collect())
    }

    /// All divisors of the member `q`, ascending.
    pub(crate) fn divisors(&self, q: &Rational) -> Result<Vec<Rational>> {
        let Some(v) = self.sweep_bound(q)? else {
            return Ok(Vec::new());
        };
        if !self.contains_scaled(v) {
            return Ok(Vec::new());
        }
        Ok((0..=v)
            .filter(|&d| self.contains_scaled(d) && self.contains_scaled(v - d))
            .map(|d| kernel::unscale(d, &self.unit))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<Rational> {
        v.iter().map(|&n| Rational::integer(n)).collect()
    }

    #[test]
    fn minimal_generators() {
        let e = FgEngine::from_generators(&ints(&[2, 3, 4, 5, 7])).unwrap();
        assert_eq!(e.atoms(), &ints(&[2, 3])[..]);
        let e = FgEngine::from_generators(&[Rational::new(3, 4), Rational::new(5, 6)]).unwrap();
        assert_eq!(e.atoms().len(), 2);
    }

    #[test]
    fn representation_of_sum() {
        let e = FgEngine::from_generators(&[Rational::new(3, 4), Rational::new(5, 6)]).unwrap();
        let z = e.representation(&Rational::new(19, 12)).unwrap().unwrap();
        assert_eq!(z.multiplicity(&Element::rat(3, 4)), 1);
        assert_eq!(z.multiplicity(&Element::rat(5, 6)), 1);
        assert!(e.representation(&Rational::new(1, 7)).unwrap().is_none());
    }

    #[test]
    fn divisors_of_six() {
        let e = FgEngine::from_generators(&ints(&[2, 3])).unwrap();
        assert_eq!(e.divisors(&Rational::integer(6)).unwrap(), ints(&[0, 2, 3, 4, 6]));
        assert_eq!(e.divisors(&Rational::integer(1)).unwrap(), Vec::<Rational>::new());
    }

    #[test]
    fn elements_below() {
        let e = FgEngine::from_generators(&ints(&[2, 3])).unwrap();
        assert_eq!(
            e.elements_up_to(&Rational::new(11, 2)).unwrap(),
            ints(&[0, 2, 3, 4, 5])
        );
        let t = FgEngine::from_generators(&[]).unwrap();
        assert_eq!(t.elements_up_to(&Rational::integer(3)).unwrap(), ints(&[0]));
    }
}
