//! Power series over a finite field, truncated at `t^N`.

use std::fmt;

use super::field::{FieldElement, FiniteField};
use crate::error::{arg, Error, Result};

pub const DEFAULT_PRECISION: usize = 32;

/// `c_0 + c_1 t + ... + c_{N-1} t^{N-1} + O(t^N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesElement {
    field: FiniteField,
    coeffs: Vec<FieldElement>,
}

impl SeriesElement {
    /// Pads with zeros or truncates to `precision` coefficients.
    pub fn new(field: &FiniteField, mut coeffs: Vec<FieldElement>, precision: usize) -> Result<Self> {
        if precision == 0 {
            return arg("precision must be positive");
        }
        coeffs.resize(precision, field.zero());
        Ok(SeriesElement {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn zero(field: &FiniteField, precision: usize) -> Result<Self> {
        SeriesElement::new(field, Vec::new(), precision)
    }

    /// `c t^k`.
    pub fn monomial(field: &FiniteField, c: FieldElement, k: usize, precision: usize) -> Result<Self> {
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        SeriesElement::new(field, coeffs, precision)
    }

    pub fn constant(field: &FiniteField, c: FieldElement, precision: usize) -> Result<Self> {
        SeriesElement::monomial(field, c, 0, precision)
    }

    pub fn t(field: &FiniteField, precision: usize) -> Result<Self> {
        SeriesElement::monomial(field, field.one(), 1, precision)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &FieldElement {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn same_ring(&self, other: &SeriesElement) -> Result<usize> {
        if self.field != other.field {
            return arg(format!("series over {} and {}", self.field, other.field));
        }
        Ok(self.precision().min(other.precision()))
    }

    pub fn add(&self, other: &SeriesElement) -> Result<SeriesElement> {
        let n = self.same_ring(other)?;
        let k = &self.field;
        let coeffs = (0..n).map(|i| k.add(&self.coeffs[i], &other.coeffs[i])).collect();
        SeriesElement::new(k, coeffs, n)
    }

    pub fn mul(&self, other: &SeriesElement) -> Result<SeriesElement> {
        let n = self.same_ring(other)?;
        let k = &self.field;
        let mut coeffs = vec![k.zero(); n];
        for (i, a) in self.coeffs[..n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                coeffs[i + j] = k.add(&coeffs[i + j], &k.mul(a, b));
            }
        }
        SeriesElement::new(k, coeffs, n)
    }

    pub fn scale(&self, c: &FieldElement) -> SeriesElement {
        SeriesElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| self.field.mul(a, c)).collect(),
        }
    }

    pub fn is_unit_t(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Inverse of a unit of `K[[t]]`.
    pub fn inverse(&self) -> Result<SeriesElement> {
        let k = &self.field;
        let c0 = k.inv(self.constant_term()).map_err(|_| Error::Domain("not a unit: zero constant term".into()))?;
        let n = self.precision();
        let mut inv = vec![k.zero(); n];
        inv[0] = c0.clone();
        for i in 1..n {
            let mut s = k.zero();
            for j in 1..=i {
                s = k.add(&s, &k.mul(&self.coeffs[j], &inv[i - j]));
            }
            inv[i] = k.neg(&k.mul(&s, &c0));
        }
        SeriesElement::new(k, inv, n)
    }

    /// `self / other` when `v(other) <= v(self)`; the result loses `v(other)` digits of precision.
    pub fn div(&self, other: &SeriesElement) -> Result<SeriesElement> {
        let n = self.same_ring(other)?;
        let Some(v) = other.valuation() else {
            return arg("division by zero");
        };
        if self.valuation().is_some_and(|w| w < v) {
            return Err(Error::Domain("the quotient is not a power series".into()));
        }
        let k = &self.field;
        let num = SeriesElement::new(k, self.coeffs[v.min(n)..n].to_vec(), n - v)?;
        let den = SeriesElement::new(k, other.coeffs[v..n].to_vec(), n - v)?;
        num.mul(&den.inverse()?)
    }
}

impl fmt::Display for SeriesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "O(t^{})", self.precision())
    }
}

/// Parses `c0 + c1*t + c2*t^2 + ... [+ O(t^N)]` with coefficients `[a0,..]` or integers.
pub fn parse_series(field: &FiniteField, s: &str, default_precision: usize) -> Result<SeriesElement> {
    let bad = |what: &str| Error::Parse(format!("bad series {s:?}: {what}"));
    let mut precision = default_precision;
    let mut terms: Vec<(usize, FieldElement)> = Vec::new();
    // split on '+' outside brackets
    let mut depth = 0;
    let mut pieces = Vec::new();
    let mut cur = String::new();
    for ch in s.chars().filter(|c| !c.is_whitespace()) {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            _ => {}
        }
        if ch == '+' && depth == 0 {
            pieces.push(std::mem::take(&mut cur));
        } else {
            cur.push(ch);
        }
    }
    pieces.push(cur);
    for piece in pieces {
        if piece.is_empty() {
            return Err(bad("empty term"));
        }
        if let Some(n) = piece.strip_prefix("O(t^").and_then(|r| r.strip_suffix(')')) {
            precision = n.parse().map_err(|_| bad("precision"))?;
            continue;
        }
        let (coeff, power) = match piece.find('t') {
            None => (piece.as_str(), 0),
            Some(i) => {
                let c = piece[..i].strip_suffix('*').unwrap_or(&piece[..i]);
                let e = match &piece[i + 1..] {
                    "" => 1,
                    rest => rest.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(|| bad("exponent"))?,
                };
                (c, e)
            }
        };
        let c = if coeff.is_empty() { field.one() } else { field.parse_element(coeff)? };
        terms.push((power, c));
    }
    let mut out = SeriesElement::zero(field, precision)?;
    for (e, c) in terms {
        if e < precision {
            out.coeffs[e] = field.add(&out.coeffs[e], &c);
        }
    }
    Ok(out)
}
