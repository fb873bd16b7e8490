//! Helpers for `S ∪ Q>=theta`.
//!
//! When `S` is finitely generated, the divisors of `x` are a finite set of
//! points together with at most one closed interval `[theta, x - theta]`, so
//! divisor, common-divisor and maximality questions reduce to finite
//! comparisons on such regions.

use std::collections::BTreeSet;

use super::fg::FgEngine;
use crate::error::Result;
use crate::numtheory::Rational;

/// A finite point set together with an optional closed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Region {
    pub points: BTreeSet<Rational>,
    pub interval: Option<(Rational, Rational)>,
}

impl Region {
    fn in_interval(&self, q: &Rational) -> bool {
        matches!(&self.interval, Some((lo, hi)) if lo <= q && q <= hi)
    }

    pub(crate) fn contains(&self, q: &Rational) -> bool {
        self.points.contains(q) || self.in_interval(q)
    }

    fn normalized(mut self) -> Region {
        if let Some((lo, hi)) = &self.interval {
            if lo == hi {
                self.points.insert(lo.clone());
                self.interval = None;
            } else {
                let (lo, hi) = (lo.clone(), hi.clone());
                self.points.retain(|p| !(lo <= *p && *p <= hi));
            }
        }
        self
    }

    pub(crate) fn intersect(&self, other: &Region) -> Region {
        let mut points: BTreeSet<Rational> = self
            .points
            .iter()
            .filter(|p| other.contains(p))
            .cloned()
            .collect();
        points.extend(other.points.iter().filter(|p| self.in_interval(p)).cloned());
        let interval = match (&self.interval, &other.interval) {
            (Some((a, b)), Some((c, d))) => {
                let lo = a.max(c).clone();
                let hi = b.min(d).clone();
                (lo <= hi).then_some((lo, hi))
            }
            _ => None,
        };
        Region { points, interval }.normalized()
    }

    pub(crate) fn has_nonzero(&self) -> bool {
        self.interval.is_some() || self.points.iter().any(|p| !p.is_zero())
    }

    pub(crate) fn is_finite(&self) -> bool {
        self.interval.is_none()
    }
}

fn member(engine: &FgEngine, theta: &Rational, q: &Rational) -> Result<bool> {
    Ok(q >= theta || engine.contains(q)?)
}

/// Divisors of the member `x` of `<base> ∪ Q>=theta`.
pub(crate) fn divisor_region(engine: &FgEngine, theta: &Rational, x: &Rational) -> Result<Region> {
    let mut points = BTreeSet::new();
    for s in engine.elements_up_to(x)? {
        let rest = x.checked_sub(&s).expect("s <= x");
        if member(engine, theta, &rest)? {
            points.insert(s);
        }
        if &rest >= theta {
            points.insert(rest);
        }
    }
    let two_theta = theta.mul_int(2);
    let interval = (x >= &two_theta).then(|| (theta.clone(), x.checked_sub(theta).expect("x >= theta")));
    Ok(Region { points, interval }.normalized())
}

pub(crate) fn common_divisor_region(
    engine: &FgEngine,
    theta: &Rational,
    set: &[Rational],
) -> Result<Region> {
    let mut region = divisor_region(engine, theta, &set[0])?;
    for x in &set[1..] {
        region = region.intersect(&divisor_region(engine, theta, x)?);
    }
    Ok(region)
}

/// Breadth-first dyadic samples of `[lo, hi]`: the endpoints (when included),
/// then the midpoints of each successive halving, `depth` levels deep.
pub(crate) fn interval_samples(
    lo: &Rational,
    hi: &Rational,
    include_lo: bool,
    include_hi: bool,
    depth: usize,
    max_count: usize,
) -> Vec<Rational> {
    let mut out = Vec::new();
    if include_lo {
        out.push(lo.clone());
    }
    if include_hi && hi != lo {
        out.push(hi.clone());
    }
    let Some(width) = hi.checked_sub(lo).filter(|w| !w.is_zero()) else {
        out.truncate(max_count);
        return out;
    };
    for level in 1..=depth.min(40) {
        let denom = 1u64 << level;
        for k in (1..denom).step_by(2) {
            if out.len() >= max_count {
                return out;
            }
            out.push(lo + &width.mul_int(k).div_int(denom));
        }
    }
    out.truncate(max_count);
    out
}
