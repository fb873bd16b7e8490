//! Integer knapsack kernel.
//!
//! Rational problems are cleared of denominators and solved over the
//! nonnegative integers: membership by Apéry-set lookup, and enumeration of
//! all solutions of `sum c_i g_i = target` by depth-first search.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numtheory::Rational;

/// Largest modulus for which an Apéry table is built.
const MAX_APERY_MODULUS: u64 = 20_000_000;

/// Scales `q` by `unit`; `None` if the product is not an integer.
pub(crate) fn scale(q: &Rational, unit: &BigInt) -> Result<Option<u64>> {
    let num = q.numer() * unit;
    let (quot, rem) = num.div_rem(q.denom());
    if !rem.is_zero() {
        return Ok(None);
    }
    quot.to_u64()
        .map(Some)
        .ok_or_else(|| Error::TooLarge(format!("{q} scaled by {unit} exceeds 64 bits")))
}

pub(crate) fn unscale(v: u64, unit: &BigInt) -> Rational {
    Rational::from_parts(BigInt::from(v), unit.clone()).expect("unit is positive")
}

/// Minimal elements of each residue class modulo the smallest generator.
#[derive(Debug, Clone)]
pub(crate) struct Apery {
    modulus: u64,
    gens: Vec<u64>,
    dist: Vec<u64>,
    /// Generator index used to reach each residue, for witness reconstruction.
    via: Vec<usize>,
}

impl Apery {
    pub(crate) fn new(gens: &[u64]) -> Result<Self> {
        let modulus = *gens.iter().min().expect("at least one generator");
        assert!(modulus > 0, "generators are positive");
        if modulus > MAX_APERY_MODULUS {
            return Err(Error::TooLarge(format!(
                "smallest scaled generator {modulus} is beyond the desk-scale limit"
            )));
        }
        let m = modulus as usize;
        let mut dist = vec![u64::MAX; m];
        let mut via = vec![usize::MAX; m];
        dist[0] = 0;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((d, r))) = heap.pop() {
            if d > dist[r] {
                continue;
            }
            for (i, &g) in gens.iter().enumerate() {
                let Some(nd) = d.checked_add(g) else { continue };
                let nr = ((r as u64 + g % modulus) % modulus) as usize;
                if nd < dist[nr] {
                    dist[nr] = nd;
                    via[nr] = i;
                    heap.push(Reverse((nd, nr)));
                }
            }
        }
        Ok(Apery {
            modulus,
            gens: gens.to_vec(),
            dist,
            via,
        })
    }

    pub(crate) fn contains(&self, v: u64) -> bool {
        let d = self.dist[(v % self.modulus) as usize];
        d != u64::MAX && v >= d
    }

    /// A coefficient vector (aligned with the generators) summing to `v`.
    pub(crate) fn representation(&self, v: u64) -> Option<Vec<u64>> {
        if !self.contains(v) {
            return None;
        }
        let mut coeffs = vec![0u64; self.gens.len()];
        let base = self.dist[(v % self.modulus) as usize];
        // walk the shortest path back to residue 0
        let mut cur = base;
        while cur != 0 {
            let i = self.via[(cur % self.modulus) as usize];
            coeffs[i] += 1;
            cur -= self.gens[i];
        }
        let smallest = self
            .gens
            .iter()
            .position(|&g| g == self.modulus)
            .expect("modulus is a generator");
        coeffs[smallest] += (v - base) / self.modulus;
        Some(coeffs)
    }
}

/// Statistics of one enumeration run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct EnumStats {
    pub nodes: u64,
    pub max_coefficient: u64,
    pub cap_hit: bool,
    /// The visitor asked to stop.
    pub stopped: bool,
}

/// Visits every `c >= 0` with `sum c_i gens[i] = target`, in lexicographically
/// decreasing order of `c`. Generators are used in the order given.
pub(crate) fn enumerate(
    gens: &[u64],
    target: u64,
    cap: u64,
    mut visit: impl FnMut(&[u64]) -> ControlFlow<()>,
) -> EnumStats {
    let mut stats = EnumStats::default();
    if gens.is_empty() {
        stats.nodes = 1;
        if target == 0 && visit(&[]).is_break() {
            stats.stopped = true;
        }
        return stats;
    }
    // gcd of each suffix: the remainder must be divisible by it
    let mut suffix_gcd = vec![0u64; gens.len() + 1];
    for i in (0..gens.len()).rev() {
        suffix_gcd[i] = suffix_gcd[i + 1].gcd(&gens[i]);
    }
    let mut coeffs = vec![0u64; gens.len()];
    let _ = dfs(gens, &suffix_gcd, 0, target, cap, &mut coeffs, &mut stats, &mut visit);
    stats
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    gens: &[u64],
    suffix_gcd: &[u64],
    i: usize,
    rest: u64,
    cap: u64,
    coeffs: &mut [u64],
    stats: &mut EnumStats,
    visit: &mut impl FnMut(&[u64]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if stats.nodes >= cap {
        stats.cap_hit = true;
        return ControlFlow::Break(());
    }
    stats.nodes += 1;
    if !rest.is_multiple_of(suffix_gcd[i]) {
        return ControlFlow::Continue(());
    }
    let g = gens[i];
    if i + 1 == gens.len() {
        let c = rest / g;
        coeffs[i] = c;
        stats.max_coefficient = stats.max_coefficient.max(c);
        let flow = visit(coeffs);
        coeffs[i] = 0;
        if flow.is_break() {
            stats.stopped = true;
        }
        return flow;
    }
    let top = rest / g;
    stats.max_coefficient = stats.max_coefficient.max(top);
    for c in (0..=top).rev() {
        coeffs[i] = c;
        dfs(gens, suffix_gcd, i + 1, rest - c * g, cap, coeffs, stats, visit)?;
    }
    coeffs[i] = 0;
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(gens: &[u64], target: u64) -> Vec<Vec<u64>> {
        let mut out = Vec::new();
        enumerate(gens, target, u64::MAX, |c| {
            out.push(c.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    #[test]
    fn enumerates_in_lex_decreasing_order() {
        assert_eq!(collect(&[3, 2], 6), vec![vec![2, 0], vec![0, 3]]);
        assert_eq!(collect(&[3, 2], 1), Vec::<Vec<u64>>::new());
        assert_eq!(collect(&[3, 2], 0), vec![vec![0, 0]]);
        assert_eq!(collect(&[], 0), vec![Vec::<u64>::new()]);
    }

    #[test]
    fn cap_stops_search() {
        let stats = enumerate(&[1, 1, 1], 50, 10, |_| ControlFlow::Continue(()));
        assert!(stats.cap_hit);
        assert_eq!(stats.nodes, 10);
    }

    #[test]
    fn apery_membership_matches_brute_force() {
        let gens = [6u64, 9, 20];
        let mut reach = [false; 200];
        reach[0] = true;
        for v in 1..200 {
            reach[v] = gens.iter().any(|&g| v as u64 >= g && reach[v - g as usize]);
        }
        let ap = Apery::new(&gens).unwrap();
        for v in 0..200u64 {
            assert_eq!(ap.contains(v), reach[v as usize], "{v}");
            if let Some(c) = ap.representation(v) {
                assert_eq!(c.iter().zip(&gens).map(|(a, b)| a * b).sum::<u64>(), v);
            }
        }
        // Frobenius number of <6,9,20>
        assert!(!ap.contains(43));
        assert!((44..200).all(|v| ap.contains(v)));
    }

    #[test]
    fn scale_detects_non_integral() {
        let unit = BigInt::from(12);
        assert_eq!(scale(&Rational::new(19, 12), &unit).unwrap(), Some(19));
        assert_eq!(scale(&Rational::new(1, 5), &unit).unwrap(), None);
    }
}
