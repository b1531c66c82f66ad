use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{format_rational, parse_rational};
use crate::{Error, Rational, Result};

/// A nonempty closed interval `[lo, hi]` with exact rational endpoints.
/// Degenerate intervals (`lo == hi`) are allowed; they arise as cylinder
/// hulls of single points and as endpoints of power images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl ClosedInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!(
                "interval endpoints out of order: {} > {}",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(ClosedInterval { lo, hi })
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// A finite union of closed intervals in canonical form: sorted by left
/// endpoint, pairwise disjoint, with touching intervals merged. Every
/// constructor normalizes, so two unions covering the same point set
/// compare equal with `==`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalUnion {
    parts: Vec<ClosedInterval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion { parts: Vec::new() }
    }

    pub fn from_intervals(pairs: Vec<(Rational, Rational)>) -> Result<Self> {
        let mut parts = Vec::with_capacity(pairs.len());
        for (lo, hi) in pairs {
            parts.push(ClosedInterval::new(lo, hi)?);
        }
        Ok(Self::normalize(parts))
    }

    /// Merges a list of valid intervals into canonical form.
    fn normalize(mut parts: Vec<ClosedInterval>) -> Self {
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
        let mut merged: Vec<ClosedInterval> = Vec::with_capacity(parts.len());
        for iv in parts {
            match merged.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => merged.push(iv),
            }
        }
        IntervalUnion { parts: merged }
    }

    /// Fast path for interval lists already sorted, disjoint, and merged.
    /// Used by generators that emit cells in ascending order.
    pub(crate) fn from_canonical_parts(parts: Vec<ClosedInterval>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0].hi < w[1].lo));
        IntervalUnion { parts }
    }

    pub fn parts(&self) -> &[ClosedInterval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_interval(&self) -> bool {
        self.parts.len() == 1
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// Smallest closed interval containing the union.
    pub fn hull(&self) -> Result<ClosedInterval> {
        match (self.parts.first(), self.parts.last()) {
            (Some(a), Some(b)) => Ok(ClosedInterval {
                lo: a.lo.clone(),
                hi: b.hi.clone(),
            }),
            _ => Err(Error::Domain("hull of an empty union".into())),
        }
    }

    /// The bounded open gaps between consecutive parts, ascending.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        self.parts
            .windows(2)
            .map(|w| (w[0].hi.clone(), w[1].lo.clone()))
            .collect()
    }

    /// Total length of the parts.
    pub fn measure(&self) -> Rational {
        let mut acc = Rational::zero();
        for iv in &self.parts {
            acc += iv.len();
        }
        acc
    }

    pub fn contains(&self, x: &Rational) -> bool {
        // Binary search on left endpoints: candidate part is the last one
        // starting at or before x.
        match self.parts.binary_search_by(|iv| iv.lo.cmp(x)) {
            Ok(_) => true,
            Err(0) => false,
            Err(i) => self.parts[i - 1].contains(x),
        }
    }

    /// Image under `x ↦ r·x + t` with `r != 0`. Negative `r` reverses
    /// orientation; the result is re-normalized.
    pub fn affine_image(&self, r: &Rational, t: &Rational) -> Result<IntervalUnion> {
        if r.is_zero() {
            return Err(Error::Domain("affine image with zero scale".into()));
        }
        let mut parts: Vec<ClosedInterval> = Vec::with_capacity(self.parts.len());
        if r.is_positive() {
            for iv in &self.parts {
                parts.push(ClosedInterval {
                    lo: r * &iv.lo + t,
                    hi: r * &iv.hi + t,
                });
            }
        } else {
            for iv in self.parts.iter().rev() {
                parts.push(ClosedInterval {
                    lo: r * &iv.hi + t,
                    hi: r * &iv.lo + t,
                });
            }
        }
        debug_assert!(parts.windows(2).all(|w| w[0].hi < w[1].lo));
        Ok(IntervalUnion { parts })
    }

    /// Image under `x ↦ x^k` for integer `k >= 2`. All endpoints must be
    /// nonnegative so the map is monotone on every part.
    pub fn power_image(&self, k: u32) -> Result<IntervalUnion> {
        if k < 2 {
            return Err(Error::Domain(format!("power image needs exponent >= 2, got {k}")));
        }
        if let Some(first) = self.parts.first() {
            if first.lo.is_negative() {
                return Err(Error::Domain(
                    "power image needs nonnegative endpoints".into(),
                ));
            }
        }
        let k = k as i32;
        let parts: Vec<ClosedInterval> = self
            .parts
            .iter()
            .map(|iv| ClosedInterval {
                lo: iv.lo.pow(k),
                hi: iv.hi.pow(k),
            })
            .collect();
        // x ↦ x^k is strictly increasing on [0, ∞), so order and strict
        // separation are preserved.
        debug_assert!(parts.windows(2).all(|w| w[0].hi < w[1].lo));
        Ok(IntervalUnion { parts })
    }

    /// Minkowski sum `{a + b : a ∈ self, b ∈ other}`.
    pub fn minkowski_sum(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = Vec::with_capacity(self.parts.len() * other.parts.len());
        for a in &self.parts {
            for b in &other.parts {
                parts.push(ClosedInterval {
                    lo: &a.lo + &b.lo,
                    hi: &a.hi + &b.hi,
                });
            }
        }
        Self::normalize(parts)
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut parts = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            let a = &self.parts[i];
            let b = &other.parts[j];
            let lo = if a.lo >= b.lo { a.lo.clone() } else { b.lo.clone() };
            let hi = if a.hi <= b.hi { a.hi.clone() } else { b.hi.clone() };
            if lo <= hi {
                parts.push(ClosedInterval { lo, hi });
            }
            if a.hi <= b.hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces cut from two canonical unions stay sorted and disjoint,
        // but adjacent pieces can touch at a point shared by both inputs.
        Self::normalize(parts)
    }

    pub fn clip(&self, lo: Rational, hi: Rational) -> Result<IntervalUnion> {
        let window = IntervalUnion::from_intervals(vec![(lo, hi)])?;
        Ok(self.intersect(&window))
    }

    /// Canonical text form: one `lo hi` pair per line, each endpoint as
    /// `numerator/denominator`. Inverse of [`IntervalUnion::from_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for iv in &self.parts {
            out.push_str(&format_rational(&iv.lo));
            out.push(' ');
            out.push_str(&format_rational(&iv.hi));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<IntervalUnion> {
        let mut pairs = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (lo, hi) = match (fields.next(), fields.next(), fields.next()) {
                (Some(lo), Some(hi), None) => (parse_rational(lo)?, parse_rational(hi)?),
                _ => {
                    return Err(Error::Domain(format!(
                        "interval line must hold exactly two rationals: {line:?}"
                    )))
                }
            };
            pairs.push((lo, hi));
        }
        IntervalUnion::from_intervals(pairs)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}
