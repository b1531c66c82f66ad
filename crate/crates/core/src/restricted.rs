//! Integers whose expansions in several bases simultaneously avoid
//! forbidden digits.
//!
//! Enumeration generates candidates digit-by-digit in the base whose digit
//! restriction is sparsest (smallest `log |B| / log b`), then filters
//! through the remaining bases. Candidates are produced in ascending order
//! so callers can stream results and stop early.

use crate::digits::{uses_only, DigitSetSpec};
use crate::orbit::ln_enclosure;
use crate::rational::{int, to_f64};
use crate::{Error, Rational, Result};

/// Digit restrictions in several pairwise distinct bases.
#[derive(Clone, Debug)]
pub struct MultiBaseSpec {
    specs: Vec<DigitSetSpec>,
}

impl MultiBaseSpec {
    pub fn new(specs: Vec<DigitSetSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::Domain("at least one digit restriction required".into()));
        }
        let mut bases: Vec<u32> = specs.iter().map(|s| s.base()).collect();
        bases.sort_unstable();
        if bases.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("bases must be pairwise distinct".into()));
        }
        Ok(MultiBaseSpec { specs })
    }

    pub fn specs(&self) -> &[DigitSetSpec] {
        &self.specs
    }

    /// Index of the restriction used to generate candidates: the one of
    /// smallest digit density `log |B| / log b`, ties to the larger base.
    /// Any choice yields the same member set; density only decides which
    /// base does the generating, so a float comparison here is harmless.
    pub fn generating_index(&self) -> usize {
        let density = |s: &DigitSetSpec| -> f64 {
            (s.allowed().len() as f64).ln() / f64::from(s.base()).ln()
        };
        let mut best = 0usize;
        for i in 1..self.specs.len() {
            let (di, db) = (density(&self.specs[i]), density(&self.specs[best]));
            if di + 1e-12 < db || ((di - db).abs() <= 1e-12 && self.specs[i].base() > self.specs[best].base()) {
                best = i;
            }
        }
        best
    }
}

/// Calls `visit` once for each member of the intersection in `[1, limit]`,
/// in ascending order.
pub fn enumerate_with<F: FnMut(u64)>(spec: &MultiBaseSpec, limit: u64, mut visit: F) -> Result<()> {
    let gen_idx = spec.generating_index();
    let g = &spec.specs[gen_idx];
    let filters: Vec<&DigitSetSpec> = spec
        .specs
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != gen_idx)
        .map(|(_, s)| s)
        .collect();
    let b = u128::from(g.base());
    let allowed = g.allowed();
    let limit = u128::from(limit);
    let Some(&lead_min) = allowed.iter().find(|&&d| d != 0) else {
        return Ok(()); // only digit 0 allowed: no positive members
    };
    let dmin = u128::from(allowed[0]);

    // min_fill[r]: smallest value of r trailing digits, i.e. the minimum
    // digit repeated r times. Lengths are bounded by log_b(limit), so these
    // stay far inside u128.
    let mut min_fill: Vec<u128> = vec![0];
    let mut digit_count = 0u32;
    {
        let mut head = u128::from(lead_min);
        while head <= limit {
            digit_count += 1;
            min_fill.push(min_fill[digit_count as usize - 1] * b + dmin);
            match head.checked_mul(b) {
                Some(next) => head = next,
                None => break,
            }
        }
    }

    // Depth-first over digit strings of each length; siblings ascend, so
    // output is sorted and the sibling loop can stop at the first prefix
    // whose cheapest completion overshoots.
    fn descend<F: FnMut(u64)>(
        prefix: u128,
        remaining: u32,
        b: u128,
        allowed: &[u32],
        min_fill: &[u128],
        limit: u128,
        filters: &[&DigitSetSpec],
        visit: &mut F,
    ) -> Result<()> {
        if remaining == 0 {
            debug_assert!(prefix <= limit);
            let n = prefix as u64;
            if filters.iter().all(|f| uses_only(n, f)) {
                visit(n);
            }
            return Ok(());
        }
        for &d in allowed {
            let child = prefix * b + u128::from(d);
            if child * pow_cached(b, remaining - 1) + min_fill[remaining as usize - 1] > limit {
                break;
            }
            descend(child, remaining - 1, b, allowed, min_fill, limit, filters, visit)?;
        }
        Ok(())
    }

    // b^r for r < 128; lengths here keep it well inside u128.
    fn pow_cached(b: u128, r: u32) -> u128 {
        b.pow(r)
    }

    for len in 1..=digit_count {
        for &d in allowed {
            if d == 0 {
                continue;
            }
            let head = u128::from(d);
            if head * pow_cached(b, len - 1) + min_fill[len as usize - 1] > limit {
                break;
            }
            descend(head, len - 1, b, allowed, &min_fill, limit, &filters, &mut visit)?;
        }
    }
    Ok(())
}

/// Ascending members of the intersection in `[1, limit]`.
pub fn enumerate(spec: &MultiBaseSpec, limit: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    enumerate_with(spec, limit, |n| out.push(n))?;
    Ok(out)
}

/// Counting diagnostics for one intersection: the certified exponent sum
/// `s = Σ log|B_i| / log b_i`, the exponent `s - (k-1)` a positive-density
/// heuristic predicts for the count up to `N`, and the exponent the actual
/// count exhibits. The prediction is a heuristic, not a theorem; this
/// report only puts the two exponents side by side.
#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub limit: u64,
    pub count: u64,
    /// Certified enclosure of `s`.
    pub s_lo: Rational,
    pub s_hi: Rational,
    /// Enclosure of `s - (k - 1)`.
    pub predicted_lo: Rational,
    pub predicted_hi: Rational,
    /// `ln(count) / ln(limit)`; NaN when count is 0 or limit < 2.
    pub empirical_exponent: f64,
}

pub fn growth_report(spec: &MultiBaseSpec, limit: u64) -> Result<GrowthReport> {
    const BITS: u32 = 64;
    let mut s_lo = int(0);
    let mut s_hi = int(0);
    for d in spec.specs() {
        let m = d.allowed().len() as u64;
        if m == 1 {
            continue; // log 1 = 0 contributes nothing
        }
        let (num_lo, num_hi) = ln_enclosure(m, BITS)?;
        let (den_lo, den_hi) = ln_enclosure(u64::from(d.base()), BITS)?;
        // ln b >= ln 2 > 0, so dividing the positive enclosures outward is
        // safe.
        s_lo += num_lo / &den_hi;
        s_hi += num_hi / &den_lo;
    }
    let shift = int(spec.specs().len() as i64 - 1);
    let predicted_lo = &s_lo - &shift;
    let predicted_hi = &s_hi - &shift;
    let count = enumerate(spec, limit)?.len() as u64;
    let empirical_exponent = if count >= 1 && limit >= 2 {
        (count as f64).ln() / (limit as f64).ln()
    } else {
        f64::NAN
    };
    Ok(GrowthReport {
        limit,
        count,
        s_lo,
        s_hi,
        predicted_lo,
        predicted_hi,
        empirical_exponent,
    })
}

/// Convenience accessor: midpoint of the `s` enclosure as a float.
impl GrowthReport {
    pub fn s_midpoint(&self) -> f64 {
        to_f64(&((&self.s_lo + &self.s_hi) / int(2)))
    }

    pub fn predicted_midpoint(&self) -> f64 {
        to_f64(&((&self.predicted_lo + &self.predicted_hi) / int(2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digits::uses_only;

    fn spec(parts: &[(u32, &[u32])]) -> MultiBaseSpec {
        MultiBaseSpec::new(
            parts
                .iter()
                .map(|&(b, ds)| DigitSetSpec::new(b, ds.iter().copied()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_base_small_example() {
        let s = spec(&[(3, &[0, 1])]);
        assert_eq!(enumerate(&s, 10).unwrap(), vec![1, 3, 4, 9, 10]);
    }

    #[test]
    fn two_base_small_example() {
        let s = spec(&[(3, &[0, 1]), (5, &[0, 1, 2])]);
        assert_eq!(enumerate(&s, 12).unwrap(), vec![1, 10, 12]);
    }

    #[test]
    fn rejects_duplicate_bases_and_empty_spec() {
        assert!(MultiBaseSpec::new(vec![]).is_err());
        assert!(MultiBaseSpec::new(vec![
            DigitSetSpec::new(3, [0, 1]).unwrap(),
            DigitSetSpec::new(3, [0, 2]).unwrap(),
        ])
        .is_err());
    }

    #[test]
    fn matches_naive_scan() {
        for parts in [
            vec![(3u32, vec![0u32, 1])],
            vec![(10, vec![0, 1, 2, 3, 4, 5])],
            vec![(3, vec![0, 1]), (5, vec![0, 1, 2])],
            vec![(7, vec![1, 3])],
            vec![(2, vec![1]), (3, vec![1, 2])],
        ] {
            let specs: Vec<DigitSetSpec> = parts
                .iter()
                .map(|(b, ds)| DigitSetSpec::new(*b, ds.iter().copied()).unwrap())
                .collect();
            let ms = MultiBaseSpec::new(specs.clone()).unwrap();
            let fast = enumerate(&ms, 20_000).unwrap();
            let naive: Vec<u64> = (1..=20_000u64)
                .filter(|&n| specs.iter().all(|d| uses_only(n, d)))
                .collect();
            assert_eq!(fast, naive, "{parts:?}");
        }
    }

    #[test]
    fn output_is_strictly_ascending() {
        let s = spec(&[(3, &[0, 1]), (5, &[0, 1, 2])]);
        let v = enumerate(&s, 2_000_000).unwrap();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn spec_order_does_not_change_members() {
        let a = spec(&[(3, &[0, 1]), (5, &[0, 1, 2])]);
        let b = spec(&[(5, &[0, 1, 2]), (3, &[0, 1])]);
        assert_eq!(enumerate(&a, 100_000).unwrap(), enumerate(&b, 100_000).unwrap());
    }

    #[test]
    fn count_doubles_per_power_for_binary_digits_base_three() {
        // Members of {0,1}-digit base-3 integers in [1, 3^m]: all nonzero
        // digit strings of length <= m, plus 3^m itself.
        let s = spec(&[(3, &[0, 1])]);
        for m in 1..=12u32 {
            let limit = 3u64.pow(m);
            let count = enumerate(&s, limit).unwrap().len() as u64;
            assert_eq!(count, 1u64 << m, "m = {m}");
        }
    }

    #[test]
    fn singleton_digit_sets() {
        assert!(enumerate(&spec(&[(5, &[0])]), 1_000).unwrap().is_empty());
        assert_eq!(enumerate(&spec(&[(5, &[2])]), 100).unwrap(), vec![2, 12, 62]);
    }

    #[test]
    fn survives_limits_near_the_integer_ceiling() {
        // Repunits of 9s in base 10: exactly the 19 values 10^r - 1 that
        // fit in u64.
        let s = spec(&[(10, &[9])]);
        let v = enumerate(&s, u64::MAX).unwrap();
        assert_eq!(v.len(), 19);
        assert_eq!(v[0], 9);
        assert_eq!(v[18], 10u64.pow(19) - 1);
    }

    #[test]
    fn generator_prefers_sparsest_base() {
        let s = spec(&[(3, &[0, 1]), (5, &[0, 1, 2]), (7, &[0, 1, 2, 3])]);
        assert_eq!(s.generating_index(), 0);
        let t = spec(&[(2, &[1]), (3, &[1, 2])]);
        assert_eq!(t.generating_index(), 0);
    }

    #[test]
    fn growth_report_single_base() {
        let s = spec(&[(3, &[0, 1])]);
        let r = growth_report(&s, 59_049).unwrap();
        assert_eq!(r.count, 1024);
        // s = ln 2 / ln 3 = 0.63092975...
        assert!(r.s_lo < crate::rational::ratio(631, 1000));
        assert!(r.s_hi > crate::rational::ratio(6309, 10000));
        assert!((&r.s_hi - &r.s_lo) < crate::rational::ratio(1, 1_000_000));
        assert!((r.empirical_exponent - 0.63093).abs() < 1e-3);
        assert_eq!(r.predicted_lo, r.s_lo);
    }

    #[test]
    fn growth_report_three_bases_predicts_positive_density() {
        let s = spec(&[(3, &[0, 1]), (5, &[0, 1, 2]), (7, &[0, 1, 2, 3])]);
        let r = growth_report(&s, 1_000_000).unwrap();
        // s = ln2/ln3 + ln3/ln5 + ln4/ln7 = 2.0259...; the heuristic
        // exponent s - 2 stays positive.
        assert!(r.predicted_lo > crate::rational::int(0));
        assert!(r.predicted_hi < crate::rational::ratio(3, 100));
        assert!(r.count >= 1);
    }
}
