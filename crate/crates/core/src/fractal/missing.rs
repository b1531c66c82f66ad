use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::digits::DigitSetSpec;
use crate::fractal::interval::ClosedInterval;
use crate::fractal::thickness::{Exactness, ThicknessReport};
use crate::fractal::IntervalUnion;
use crate::rational::reduced_ratio_u128;
use crate::{Error, Rational, Result};

/// Cap on cylinder count when materializing rational endpoint lists.
const APPROX_CELL_CAP: u128 = 300_000;
/// Cap on cylinder count for the integer-lattice thickness path, which
/// stores two machine words per cell instead of heap rationals.
const LATTICE_CELL_CAP: u128 = 4_000_000;

/// The set of reals in `[0, 1]` whose base-`b` expansion uses only the
/// digits in `spec`, mapped through the affine frame `x ↦ scale·x + offset`
/// with `scale > 0`.
///
/// Depth-`d` approximations replace each surviving depth-`d` cylinder by
/// its convex hull, so hull and gap data are exact for the generations the
/// depth reaches (deeper gaps are strictly shorter, scaling down by `b` per
/// generation, so the largest gap is already exact at depth 1).
#[derive(Clone, Debug)]
pub struct MissingDigitSet {
    spec: DigitSetSpec,
    scale: Rational,
    offset: Rational,
}

impl MissingDigitSet {
    pub fn new(base: u32, digits: &[u32]) -> Result<Self> {
        Self::with_frame(base, digits, Rational::one(), Rational::zero())
    }

    pub fn with_frame(base: u32, digits: &[u32], scale: Rational, offset: Rational) -> Result<Self> {
        if base < 3 {
            return Err(Error::Domain(format!(
                "missing-digit sets need base >= 3, got {base}"
            )));
        }
        let spec = DigitSetSpec::new(base, digits.iter().copied())?;
        if spec.allowed().len() < 2 {
            return Err(Error::Domain(
                "missing-digit sets need at least two allowed digits".into(),
            ));
        }
        if !scale.is_positive() {
            return Err(Error::Domain("frame scale must be positive".into()));
        }
        Ok(MissingDigitSet { spec, scale, offset })
    }

    pub fn spec(&self) -> &DigitSetSpec {
        &self.spec
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    fn digit_span(&self) -> (u32, u32) {
        let allowed = self.spec.allowed();
        (allowed[0], allowed[allowed.len() - 1])
    }

    /// Exact attractor hull: `[min(B), max(B)] / (b - 1)` through the frame.
    pub fn hull(&self) -> ClosedInterval {
        let (min_d, max_d) = self.digit_span();
        let bm1 = BigInt::from(self.spec.base() - 1);
        let lo = Rational::new(BigInt::from(min_d), bm1.clone());
        let hi = Rational::new(BigInt::from(max_d), bm1);
        ClosedInterval {
            lo: &self.scale * lo + &self.offset,
            hi: &self.scale * hi + &self.offset,
        }
    }

    /// Normalized thickness in closed form, available when the allowed
    /// digits are contiguous but not the full digit set:
    /// `s = (max - min)/(b - 1)`.
    pub fn closed_form_s(&self) -> Option<Rational> {
        if !self.spec.is_contiguous() || self.spec.allowed().len() == self.spec.base() as usize {
            return None;
        }
        let (min_d, max_d) = self.digit_span();
        Some(Rational::new(
            BigInt::from(max_d - min_d),
            BigInt::from(self.spec.base() - 1),
        ))
    }

    /// Survivor cylinders at `depth` on the integer lattice with unit
    /// `1/q`, `q = b^depth (b - 1)`: the cylinder of digit word `W` spans
    /// `[W(b-1) + min(B), W(b-1) + max(B)]`. Touching cells merge; cells
    /// never overlap. Ascending order falls out of the digit DFS.
    fn raw_cells(&self, depth: u32, cap: u128) -> Result<(Vec<(u128, u128)>, u128)> {
        let b = self.spec.base() as u128;
        let m = self.spec.allowed().len() as u128;
        let mut leaf_count: u128 = 1;
        let mut q: u128 = b - 1;
        for _ in 0..depth {
            leaf_count = leaf_count
                .checked_mul(m)
                .filter(|&n| n <= cap)
                .ok_or_else(|| {
                    Error::Capacity(format!(
                        "depth {depth} yields more than {cap} cylinders in base {b}"
                    ))
                })?;
            q = q
                .checked_mul(b)
                .filter(|&n| n <= u64::MAX as u128)
                .ok_or_else(|| {
                    Error::Capacity(format!("lattice denominator overflows at depth {depth}"))
                })?;
        }
        let (min_d, max_d) = self.digit_span();
        let mut cells: Vec<(u128, u128)> = Vec::new();
        let mut word_stack: Vec<(u128, u32)> = vec![(0, depth)];
        // Explicit stack, children pushed in reverse so digits pop ascending.
        while let Some((w, remaining)) = word_stack.pop() {
            if remaining == 0 {
                let lo = w * (b - 1) + min_d as u128;
                let hi = w * (b - 1) + max_d as u128;
                match cells.last_mut() {
                    Some(last) if last.1 == lo => last.1 = hi,
                    _ => cells.push((lo, hi)),
                }
                continue;
            }
            for &d in self.spec.allowed().iter().rev() {
                word_stack.push((w * b + d as u128, remaining - 1));
            }
        }
        Ok((cells, q))
    }

    /// Depth-`d` approximation as a rational interval union through the
    /// frame.
    pub fn approx(&self, depth: u32) -> Result<IntervalUnion> {
        let (cells, q) = self.raw_cells(depth, APPROX_CELL_CAP)?;
        let parts = cells
            .into_iter()
            .map(|(lo, hi)| ClosedInterval {
                lo: &self.scale * reduced_ratio_u128(lo, q) + &self.offset,
                hi: &self.scale * reduced_ratio_u128(hi, q) + &self.offset,
            })
            .collect();
        Ok(IntervalUnion::from_canonical_parts(parts))
    }

    /// Thickness at `depth`, computed on the integer lattice so large
    /// cylinder counts stay cheap. Bridge/gap comparisons cross-multiply in
    /// `u128` (the lattice denominator is kept within `u64`). Thickness is
    /// frame-invariant, so the lattice values are final; only the witness
    /// gap is mapped through the frame.
    ///
    /// Marked [`Exactness::Exact`] when the digit set is contiguous and
    /// `depth >= 2`: from depth 2 on, every new gap generation repeats the
    /// existing bridge-to-gap ratios scaled by the base, so the minimum
    /// score is already attained.
    pub fn thickness_report(&self, depth: u32) -> Result<ThicknessReport> {
        let (cells, q) = self.raw_cells(depth, LATTICE_CELL_CAP)?;
        if cells.len() < 2 {
            return Err(Error::Domain(
                "thickness needs at least one bounded gap; this set has none at this depth".into(),
            ));
        }
        let n = cells.len() - 1;
        // Gap i sits between cells i and i+1.
        let gap_lo = |i: usize| cells[i].1;
        let gap_hi = |i: usize| cells[i + 1].0;
        let gap_len = |i: usize| gap_hi(i) - gap_lo(i);
        let hull_lo = cells[0].0;
        let hull_hi = cells[n].1;

        let mut bridges: Vec<u128> = Vec::with_capacity(n);
        let mut stack: Vec<usize> = Vec::new();
        for i in 0..n {
            while let Some(&j) = stack.last() {
                if gap_len(j) < gap_len(i) {
                    stack.pop();
                } else {
                    break;
                }
            }
            bridges.push(match stack.last() {
                Some(&j) => gap_lo(i) - gap_hi(j),
                None => gap_lo(i) - hull_lo,
            });
            stack.push(i);
        }
        stack.clear();
        for i in (0..n).rev() {
            while let Some(&j) = stack.last() {
                if gap_len(j) < gap_len(i) {
                    stack.pop();
                } else {
                    break;
                }
            }
            let b_r = match stack.last() {
                Some(&j) => gap_lo(j) - gap_hi(i),
                None => hull_hi - gap_hi(i),
            };
            if b_r < bridges[i] {
                bridges[i] = b_r;
            }
            stack.push(i);
        }

        // Minimize bridges[i]/len(i) by u128 cross-multiplication.
        let mut best = 0usize;
        for i in 1..n {
            if bridges[i] * gap_len(best) < bridges[best] * gap_len(i) {
                best = i;
            }
        }
        let b_best = bridges[best];
        let l_best = gap_len(best);
        let c = reduced_ratio_u128(b_best, l_best);
        let s = reduced_ratio_u128(b_best, b_best + l_best);
        let witness_gap = (
            &self.scale * reduced_ratio_u128(gap_lo(best), q) + &self.offset,
            &self.scale * reduced_ratio_u128(gap_hi(best), q) + &self.offset,
        );
        let exactness = if self.spec.is_contiguous() && depth >= 2 {
            Exactness::Exact
        } else {
            Exactness::Estimate
        };
        Ok(ThicknessReport {
            c,
            s,
            witness_gap,
            depth: Some(depth),
            exactness,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::thickness::thickness;
    use crate::rational::ratio;

    #[test]
    fn rejects_bad_parameters() {
        assert!(MissingDigitSet::new(2, &[0, 1]).is_err());
        assert!(MissingDigitSet::new(5, &[3]).is_err());
        assert!(MissingDigitSet::with_frame(3, &[0, 2], ratio(0, 1), ratio(0, 1)).is_err());
        assert!(MissingDigitSet::with_frame(3, &[0, 2], ratio(-1, 1), ratio(0, 1)).is_err());
    }

    #[test]
    fn zero_free_middle_thirds_cells() {
        let c3 = MissingDigitSet::new(3, &[0, 2]).unwrap();
        let u = c3.approx(2).unwrap();
        let expect = IntervalUnion::from_intervals(vec![
            (ratio(0, 1), ratio(1, 9)),
            (ratio(2, 9), ratio(1, 3)),
            (ratio(2, 3), ratio(7, 9)),
            (ratio(8, 9), ratio(1, 1)),
        ])
        .unwrap();
        assert_eq!(u, expect);
        let hull = c3.hull();
        assert_eq!(hull.lo, ratio(0, 1));
        assert_eq!(hull.hi, ratio(1, 1));
    }

    #[test]
    fn depth_zero_is_the_hull() {
        let c3 = MissingDigitSet::new(3, &[0, 2]).unwrap();
        let u = c3.approx(0).unwrap();
        assert!(u.is_interval());
        assert_eq!(u.parts()[0].lo, ratio(0, 1));
        assert_eq!(u.parts()[0].hi, ratio(1, 1));
    }

    #[test]
    fn full_digit_set_collapses_to_one_interval() {
        let full = MissingDigitSet::new(5, &[0, 1, 2, 3, 4]).unwrap();
        let u = full.approx(3).unwrap();
        assert!(u.is_interval());
        assert!(full.thickness_report(3).is_err());
        assert!(full.closed_form_s().is_none());
    }

    #[test]
    fn contiguous_thickness_matches_closed_form() {
        for base in 3u32..=9 {
            for hi in 1..base - 1 {
                let digits: Vec<u32> = (0..=hi).collect();
                let set = MissingDigitSet::new(base, &digits).unwrap();
                let want = set.closed_form_s().unwrap();
                assert_eq!(want, ratio(hi as i64, (base - 1) as i64));
                for depth in 2..=4 {
                    let rep = set.thickness_report(depth).unwrap();
                    assert_eq!(rep.s, want, "base {base} digits 0..={hi} depth {depth}");
                    assert_eq!(rep.exactness, Exactness::Exact);
                    assert_eq!(rep.depth, Some(depth));
                }
            }
        }
    }

    #[test]
    fn shifted_contiguous_set_keeps_its_span_thickness() {
        // {2,3} in base 5 is a translate of {0,1}, so s = 1/4 exactly.
        let set = MissingDigitSet::new(5, &[2, 3]).unwrap();
        let rep = set.thickness_report(3).unwrap();
        assert_eq!(rep.s, ratio(1, 4));
        assert_eq!(rep.exactness, Exactness::Exact);
    }

    #[test]
    fn non_contiguous_reports_are_estimates() {
        let c3 = MissingDigitSet::new(3, &[0, 2]).unwrap();
        let rep = c3.thickness_report(6).unwrap();
        assert_eq!(rep.c, ratio(1, 1));
        assert_eq!(rep.s, ratio(1, 2));
        assert_eq!(rep.exactness, Exactness::Estimate);
        assert!(c3.closed_form_s().is_none());
        // The deepest new gap generation keeps the same score, so the
        // witness is the leftmost scoring gap.
        assert_eq!(rep.witness_gap.0, ratio(1, 729));
        assert_eq!(rep.witness_gap.1, ratio(2, 729));
    }

    #[test]
    fn lattice_path_agrees_with_rational_path() {
        for (base, digits) in [
            (3u32, vec![0u32, 2]),
            (5, vec![0, 1, 3]),
            (7, vec![1, 2, 5, 6]),
            (10, vec![0, 3, 4, 9]),
        ] {
            let set = MissingDigitSet::new(base, &digits).unwrap();
            for depth in 1..=3 {
                let rep = set.thickness_report(depth).unwrap();
                let via_union = thickness(&set.approx(depth).unwrap()).unwrap();
                assert_eq!(rep.c, via_union.c, "base {base} depth {depth}");
                assert_eq!(rep.s, via_union.s);
                assert_eq!(rep.witness_gap, via_union.witness_gap);
            }
        }
    }

    #[test]
    fn frame_shifts_witness_but_not_scores() {
        let plain = MissingDigitSet::new(3, &[0, 2]).unwrap();
        let framed =
            MissingDigitSet::with_frame(3, &[0, 2], ratio(5, 7), ratio(-3, 2)).unwrap();
        let a = plain.thickness_report(4).unwrap();
        let b = framed.thickness_report(4).unwrap();
        assert_eq!(a.c, b.c);
        assert_eq!(a.s, b.s);
        assert_eq!(b.witness_gap.0, ratio(5, 7) * a.witness_gap.0 + ratio(-3, 2));
        let hull = framed.hull();
        assert_eq!(hull.lo, ratio(-3, 2));
        assert_eq!(hull.hi, ratio(5, 7) - ratio(3, 2));
    }

    #[test]
    fn depth_capacity_guard_trips() {
        let c3 = MissingDigitSet::new(3, &[0, 2]).unwrap();
        match c3.approx(40) {
            Err(Error::Capacity(_)) => {}
            other => panic!("expected capacity error, got {other:?}"),
        }
    }
}
