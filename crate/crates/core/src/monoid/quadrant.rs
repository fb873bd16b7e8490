//! The monoid `(N0 x N0) ∪ (Z x N>=2)`.
//!
//! Divisors of `(c, d)` are organised by their second coordinate `b in [0, d]`:
//! for a fixed `b` the admissible first coordinates form an interval whose
//! ends are either finite (`0` or `c`) or unbounded, which makes divisor and
//! common-divisor questions exactly decidable even though the sets are
//! usually infinite.

use super::presentation::Element;
use super::report::Factorization;

pub(crate) const ATOMS: [(i64, i64); 2] = [(0, 1), (1, 0)];

pub(crate) fn is_member(a: i64, b: i64) -> bool {
    b >= 2 || (b >= 0 && a >= 0)
}

/// Admissible first coordinates for divisors with a fixed second coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Row {
    pub b: i64,
    pub lo: Option<i64>,
    pub hi: Option<i64>,
}

impl Row {
    fn is_empty(&self) -> bool {
        matches!((self.lo, self.hi), (Some(l), Some(h)) if l > h)
    }

    fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    fn intersect(&self, other: &Row) -> Row {
        debug_assert_eq!(self.b, other.b);
        let lo = match (self.lo, other.lo) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, None) | (None, x) => x,
        };
        let hi = match (self.hi, other.hi) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) | (None, x) => x,
        };
        Row { b: self.b, lo, hi }
    }

    /// Whether the row has a point other than `(0, 0)`.
    fn has_nonzero(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        if self.b != 0 {
            return true;
        }
        // b == 0: lo is always Some(0) here, so the row is [0, hi]
        match self.hi {
            None => true,
            Some(h) => h >= 1 || self.lo.is_none_or(|l| l <= -1),
        }
    }

    fn contains(&self, a: i64) -> bool {
        self.lo.is_none_or(|l| a >= l) && self.hi.is_none_or(|h| a <= h)
    }
}

/// Divisor rows of the member `(c, d)`.
pub(crate) fn divisor_rows(c: i64, d: i64) -> Vec<Row> {
    (0..=d)
        .map(|b| Row {
            b,
            lo: if b >= 2 { None } else { Some(0) },
            hi: if d - b >= 2 { None } else { Some(c) },
        })
        .filter(|r| !r.is_empty())
        .collect()
}

pub(crate) fn common_rows(elements: &[(i64, i64)]) -> Vec<Row> {
    let dmin = elements.iter().map(|e| e.1).min().unwrap_or(0);
    let mut rows: Vec<Row> = divisor_rows(elements[0].0, elements[0].1)
        .into_iter()
        .filter(|r| r.b <= dmin)
        .collect();
    for &(c, d) in &elements[1..] {
        let other = divisor_rows(c, d);
        rows = rows
            .into_iter()
            .filter_map(|r| {
                other
                    .iter()
                    .find(|o| o.b == r.b)
                    .map(|o| r.intersect(o))
                    .filter(|x| !x.is_empty())
            })
            .collect();
    }
    rows
}

pub(crate) fn has_nonzero_common_divisor(elements: &[(i64, i64)]) -> bool {
    common_rows(elements).iter().any(Row::has_nonzero)
}

pub(crate) fn rows_are_finite(rows: &[Row]) -> bool {
    rows.iter().all(Row::is_bounded)
}

/// Points of the rows with `|a| <= radius` (all points when the rows are bounded).
pub(crate) fn rows_points(rows: &[Row], radius: i64, cap: usize) -> Vec<Element> {
    let mut out = Vec::new();
    for r in rows {
        let lo = r.lo.unwrap_or(-radius);
        let hi = r.hi.unwrap_or(radius);
        for a in lo..=hi {
            if out.len() >= cap {
                return out;
            }
            if r.contains(a) {
                out.push(Element::Pair(a, r.b));
            }
        }
    }
    out.sort();
    out
}

/// A split `(a, b) = u + v` into nonzero members, if one exists.
///
/// For `b >= 2` the split `(1,0) + (a-1, b)` always works; for `b <= 1` both
/// parts lie in `N0 x N0`, so a window of radius `|a| + 2` is exhaustive.
pub(crate) fn find_split(a: i64, b: i64) -> Option<((i64, i64), (i64, i64))> {
    let w = a.abs() + 2;
    for b1 in 0..=b {
        for a1 in -w..=w {
            let (a2, b2) = (a - a1, b - b1);
            if (a1, b1) != (0, 0)
                && (a2, b2) != (0, 0)
                && is_member(a1, b1)
                && is_member(a2, b2)
            {
                return Some(((a1, b1), (a2, b2)));
            }
        }
    }
    None
}

/// The unique factorization of `(a, b)` when both coordinates are nonnegative.
pub(crate) fn factorization(a: i64, b: i64) -> Option<Factorization> {
    if a < 0 || b < 0 {
        return None;
    }
    let mut z = Factorization::new();
    z.add(Element::Pair(1, 0), a as u64);
    z.add(Element::Pair(0, 1), b as u64);
    Some(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_blocks() {
        assert!(!is_member(-3, 1));
        assert!(is_member(-3, 2));
        assert!(is_member(0, 0));
        assert!(!is_member(0, -1));
    }

    #[test]
    fn splits() {
        assert_eq!(find_split(-1, 2), Some(((1, 0), (-2, 2))));
        assert_eq!(find_split(1, 0), None);
        assert_eq!(find_split(0, 1), None);
        assert!(find_split(2, 1).is_some());
    }

    #[test]
    fn divisor_rows_of_small_elements() {
        // (2,1): b=0 -> [0,2], b=1 -> [0,2]
        let rows = divisor_rows(2, 1);
        assert!(rows_are_finite(&rows));
        assert_eq!(rows_points(&rows, 0, 100).len(), 6);
        // (0,2): b=0 -> a >= 0 unbounded
        assert!(!rows_are_finite(&divisor_rows(0, 2)));
    }

    #[test]
    fn common_divisors_of_atoms() {
        assert!(!has_nonzero_common_divisor(&[(1, 0), (0, 1)]));
        assert!(has_nonzero_common_divisor(&[(1, 0), (3, 0)]));
        assert!(has_nonzero_common_divisor(&[(-5, 3), (7, 2)]));
    }
}
