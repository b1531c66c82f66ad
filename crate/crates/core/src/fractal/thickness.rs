use num_bigint::BigInt;
use num_traits::One;

use crate::fractal::IntervalUnion;
use crate::rational::int;
use crate::{Error, Rational, Result};

/// Whether a reported quantity is the set's true value or a finite-depth
/// stand-in that only bounds it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Estimate,
}

impl Exactness {
    pub fn as_str(self) -> &'static str {
        match self {
            Exactness::Exact => "exact",
            Exactness::Estimate => "estimate",
        }
    }
}

/// Thickness of an interval union.
///
/// For each bounded gap `G`, look left and right for the nearest gap at
/// least as long as `G` (the hull ends count as unbounded gaps). The
/// bridges `b_L`, `b_R` are the distances from `G` to those neighbors, and
/// `G` scores `min(b_L, b_R) / |G|`. The thickness `c` is the minimum
/// score over all bounded gaps; `s = c / (c + 1)` is the normalized form
/// used when summing across sets. `witness_gap` is the first gap (left to
/// right) attaining the minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThicknessReport {
    pub c: Rational,
    pub s: Rational,
    pub witness_gap: (Rational, Rational),
    /// Approximation depth the union was built at, when known.
    pub depth: Option<u32>,
    pub exactness: Exactness,
}

struct Gap {
    lo: Rational,
    hi: Rational,
    len: Rational,
}

/// Computes the thickness of `u`, which must have at least one bounded gap.
/// The result is marked [`Exactness::Estimate`]; callers that know the gap
/// structure is depth-stable (see [`super::MissingDigitSet`]) upgrade it.
pub fn thickness(u: &IntervalUnion) -> Result<ThicknessReport> {
    let gaps: Vec<Gap> = u
        .gaps()
        .into_iter()
        .map(|(lo, hi)| {
            let len = &hi - &lo;
            Gap { lo, hi, len }
        })
        .collect();
    if gaps.is_empty() {
        return Err(Error::Domain(
            "thickness needs a union with at least one bounded gap".into(),
        ));
    }
    let hull = u.hull()?;

    // bridges[i] = min(b_L, b_R) for gap i, via one monotonic-stack pass per
    // direction: walking left to right, the stack holds indices of gaps not
    // yet dominated by a longer-or-equal successor, so the top after popping
    // strictly shorter gaps is exactly the nearest qualifying gap on the
    // left. An empty stack means the bridge runs to the hull end.
    let n = gaps.len();
    let mut bridges: Vec<Rational> = Vec::with_capacity(n);
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..n {
        while let Some(&j) = stack.last() {
            if gaps[j].len < gaps[i].len {
                stack.pop();
            } else {
                break;
            }
        }
        let b_l = match stack.last() {
            Some(&j) => &gaps[i].lo - &gaps[j].hi,
            None => &gaps[i].lo - &hull.lo,
        };
        bridges.push(b_l);
        stack.push(i);
    }
    stack.clear();
    for i in (0..n).rev() {
        while let Some(&j) = stack.last() {
            if gaps[j].len < gaps[i].len {
                stack.pop();
            } else {
                break;
            }
        }
        let b_r = match stack.last() {
            Some(&j) => &gaps[j].lo - &gaps[i].hi,
            None => &hull.hi - &gaps[i].hi,
        };
        if b_r < bridges[i] {
            bridges[i] = b_r;
        }
        stack.push(i);
    }

    let mut best: Option<(Rational, usize)> = None;
    for (i, g) in gaps.iter().enumerate() {
        let score = &bridges[i] / &g.len;
        match &best {
            Some((c, _)) if *c <= score => {}
            _ => best = Some((score, i)),
        }
    }
    let (c, i) = best.expect("nonempty gap list");
    let s = &c / (&c + Rational::one());
    Ok(ThicknessReport {
        witness_gap: (gaps[i].lo.clone(), gaps[i].hi.clone()),
        c,
        s,
        depth: None,
        exactness: Exactness::Estimate,
    })
}

/// Certified bounds for the `k`-th power image of the zero-free middle-third
/// set: thickness at least `c_lower = 1/(2^k - 1)`, at most
/// `c_upper = (3^k - 2^k)/(4^k - 3^k)`, so `s = c/(c+1)` is at least
/// `1/2^k`-ish; `s_lower` records the exact normalized lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPowerBounds {
    pub k: u32,
    pub c_lower: Rational,
    pub c_upper: Rational,
    pub s_lower: Rational,
}

pub fn kpower_bounds(k: u32) -> Result<KPowerBounds> {
    if k < 2 {
        return Err(Error::Domain(format!("power bounds need k >= 2, got {k}")));
    }
    if k > 60 {
        return Err(Error::Capacity(format!("power bounds capped at k = 60, got {k}")));
    }
    let two_k = Rational::from_integer(BigInt::from(2).pow(k));
    let three_k = Rational::from_integer(BigInt::from(3).pow(k));
    let four_k = Rational::from_integer(BigInt::from(4).pow(k));
    let c_lower = (&two_k - int(1)).recip();
    let c_upper = (&three_k - &two_k) / (&four_k - &three_k);
    let s_lower = two_k.recip();
    Ok(KPowerBounds {
        k,
        c_lower,
        c_upper,
        s_lower,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio as r;

    fn union_of(pairs: &[(i64, i64, i64, i64)]) -> IntervalUnion {
        IntervalUnion::from_intervals(
            pairs
                .iter()
                .map(|&(a, b, c, d)| (r(a, b), r(c, d)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn middle_thirds_pattern_scores_one() {
        // Depth-2 middle-third construction: four pieces of length 1/9.
        let u = union_of(&[(0, 1, 1, 9), (2, 9, 1, 3), (2, 3, 7, 9), (8, 9, 1, 1)]);
        let t = thickness(&u).unwrap();
        assert_eq!(t.c, r(1, 1));
        assert_eq!(t.s, r(1, 2));
        // Both small gaps score 1 via their outer bridge of length 1/9; the
        // first one wins the tie.
        assert_eq!(t.witness_gap, (r(1, 9), r(2, 9)));
    }

    #[test]
    fn single_interval_has_no_thickness() {
        let u = union_of(&[(0, 1, 1, 1)]);
        assert!(thickness(&u).is_err());
    }

    #[test]
    fn bridge_stops_at_longer_gap_not_adjacent_one() {
        // Gaps: (1,2) of length 1, (5/2,11/4) of length 1/4. For the short
        // gap, the left bridge must stop at the long gap's right end (2),
        // not run to the hull: b_L = 1/2. On the right the hull end gives
        // b_R = 5/4. Score = (1/2)/(1/4) = 2.
        // The long gap sees only hull ends: b_L = 1, b_R = 5/4, score 1.
        let u = union_of(&[(0, 1, 1, 1), (2, 1, 5, 2), (11, 4, 4, 1)]);
        let t = thickness(&u).unwrap();
        assert_eq!(t.c, r(1, 1));
        assert_eq!(t.witness_gap, (r(1, 1), r(2, 1)));
    }

    #[test]
    fn equal_length_gap_qualifies_as_bridge_stop() {
        // Two gaps of equal length 1/4 separated by a piece of length 1/8:
        // each bridge may stop at the other gap, giving c = (1/8)/(1/4).
        let u = union_of(&[(0, 1, 1, 4), (1, 2, 5, 8), (7, 8, 9, 8)]);
        let t = thickness(&u).unwrap();
        assert_eq!(t.c, r(1, 2));
        assert_eq!(t.s, r(1, 3));
        assert_eq!(t.witness_gap, (r(1, 4), r(1, 2)));
    }

    #[test]
    fn thickness_is_affine_invariant() {
        let u = union_of(&[(0, 1, 1, 9), (2, 9, 1, 3), (2, 3, 7, 9), (8, 9, 1, 1)]);
        let base = thickness(&u).unwrap();
        for (num, den, off_n, off_d) in [(3i64, 1i64, 5i64, 7i64), (-2, 5, 0, 1), (7, 11, -4, 3)] {
            let v = u.affine_image(&r(num, den), &r(off_n, off_d)).unwrap();
            let t = thickness(&v).unwrap();
            assert_eq!(t.c, base.c, "scale {num}/{den}");
            assert_eq!(t.s, base.s);
        }
    }

    #[test]
    fn kpower_bounds_small_cases() {
        let b = kpower_bounds(2).unwrap();
        assert_eq!(b.c_lower, r(1, 3));
        assert_eq!(b.c_upper, r(5, 7));
        assert_eq!(b.s_lower, r(1, 4));
        let b3 = kpower_bounds(3).unwrap();
        assert_eq!(b3.c_lower, r(1, 7));
        assert_eq!(b3.c_upper, r(19, 37));
        assert_eq!(b3.s_lower, r(1, 8));
        assert!(kpower_bounds(1).is_err());
        assert!(kpower_bounds(61).is_err());
    }

    #[test]
    fn kpower_lower_bound_stays_below_upper() {
        for k in 2..=20 {
            let b = kpower_bounds(k).unwrap();
            assert!(b.c_lower <= b.c_upper, "k = {k}");
            assert!(b.s_lower < r(1, 1));
        }
    }
}
