use std::sync::{Mutex, OnceLock};

use crate::error::{arg, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases cover all of `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial-division factorization into `(prime, exponent)` pairs, ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimeKind {
    /// 2, 3, 5, 7, ...
    AllPrimes,
    /// 3, 5, 7, 11, ...
    OddPrimes,
}

/// A lazily extended, strictly increasing sequence of primes.
///
/// Indices are 1-based. The cache is shared behind a mutex so concurrent
/// readers observe a consistent prefix.
#[derive(Debug)]
pub struct PrimeSequence {
    kind: PrimeKind,
    cache: Mutex<Vec<u64>>,
}

impl PrimeSequence {
    pub fn new(kind: PrimeKind) -> Self {
        PrimeSequence {
            kind,
            cache: Mutex::new(Vec::new()),
        }
    }

    /// Process-wide shared instance for `kind`.
    pub fn shared(kind: PrimeKind) -> &'static PrimeSequence {
        static ALL: OnceLock<PrimeSequence> = OnceLock::new();
        static ODD: OnceLock<PrimeSequence> = OnceLock::new();
        match kind {
            PrimeKind::AllPrimes => ALL.get_or_init(|| PrimeSequence::new(kind)),
            PrimeKind::OddPrimes => ODD.get_or_init(|| PrimeSequence::new(kind)),
        }
    }

    pub fn kind(&self) -> PrimeKind {
        self.kind
    }

    fn first(&self) -> u64 {
        match self.kind {
            PrimeKind::AllPrimes => 2,
            PrimeKind::OddPrimes => 3,
        }
    }

    fn extend_to(&self, cache: &mut Vec<u64>, len: usize) {
        while cache.len() < len {
            let mut c = match cache.last() {
                None => self.first(),
                Some(2) => 3,
                Some(&p) => p + 2,
            };
            while !is_prime(c) {
                c += 2;
            }
            cache.push(c);
        }
    }

    /// The `n`-th prime of the sequence (1-based).
    pub fn nth(&self, n: usize) -> Result<u64> {
        if n == 0 {
            return arg("prime sequence index must be at least 1");
        }
        let mut cache = self.cache.lock().expect("prime cache poisoned");
        self.extend_to(&mut cache, n);
        Ok(cache[n - 1])
    }

    /// The 1-based position of `p` in the sequence, or `None` if `p` is not an element.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        if p < self.first() || !is_prime(p) {
            return None;
        }
        let mut cache = self.cache.lock().expect("prime cache poisoned");
        while cache.last().is_none_or(|&last| last < p) {
            let len = cache.len() + 64;
            self.extend_to(&mut cache, len);
        }
        cache.binary_search(&p).ok().map(|i| i + 1)
    }

    /// All elements `<= bound`, with their indices.
    pub fn up_to(&self, bound: u64) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        let mut n = 1;
        loop {
            let p = self.nth(n).expect("n >= 1");
            if p > bound {
                return out;
            }
            out.push((n, p));
            n += 1;
        }
    }
}

/// Free-function form of [`PrimeSequence::nth`] on the shared sequences.
pub fn nth_prime(kind: PrimeKind, n: usize) -> Result<u64> {
    PrimeSequence::shared(kind).nth(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_is_prime(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn sequence_heads() {
        assert_eq!(nth_prime(PrimeKind::OddPrimes, 1).unwrap(), 3);
        assert_eq!(nth_prime(PrimeKind::AllPrimes, 1).unwrap(), 2);
        assert_eq!(nth_prime(PrimeKind::OddPrimes, 3).unwrap(), 7);
        assert!(nth_prime(PrimeKind::AllPrimes, 0).is_err());
    }

    #[test]
    fn index_roundtrip() {
        let seq = PrimeSequence::new(PrimeKind::OddPrimes);
        assert_eq!(seq.index_of(2), None);
        assert_eq!(seq.index_of(9), None);
        for n in 1..200 {
            let p = seq.nth(n).unwrap();
            assert_eq!(seq.index_of(p), Some(n));
        }
        let all = PrimeSequence::new(PrimeKind::AllPrimes);
        assert_eq!(all.index_of(2), Some(1));
        assert_eq!(all.up_to(12).len(), 5);
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }
}
