//! Orbit scans of `({k·α_1}, ..., {k·α_m})` with certified classification.
//!
//! Two engines live here. The general one advances certified dyadic
//! enclosures of the partial sums `k·α_i` and classifies each step against
//! a near-return box, restarting at higher precision if any step cannot be
//! classified. The specialized one tracks the orbit of
//! `({k·log3/log4}, {k·log3/log5})` through exact integer power triples
//! `(3^k, 4^(f4+1), 5^(f5+1))`, so region verdicts are exact comparisons of
//! big integers; floats only pre-screen, never decide.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::orbit::logr::LogRatio;
use crate::rational::{int, reduced_ratio_u128};
use crate::{Error, Rational, Result};

/// Detailed records kept per report; every hit's step index is always
/// recorded in `hit_ks`.
pub const HIT_DETAIL_CAP: usize = 256;
/// Exact mapped coordinates are cloned big rationals, so only the first
/// few hits carry them; later hits can be reproduced with [`PowerOrbit`].
pub const MAPPED_DETAIL_CAP: usize = 32;
const ESCALATION_LIMIT: u32 = 4;

/// One step of an orbit scan that satisfied the predicate.
#[derive(Clone, Debug)]
pub struct OrbitHit {
    pub k: u64,
    /// Enclosure of each fractional coordinate at step `k`.
    pub point: Vec<(Rational, Rational)>,
    /// Width bound on the coordinate enclosures at this step.
    pub error_bound: Rational,
    /// Exact region coordinates for the specialized region scan, filled for
    /// the first [`MAPPED_DETAIL_CAP`] hits.
    pub mapped: Option<(Rational, Rational)>,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub k_max: u64,
    /// Working precision that produced a fully classified scan.
    pub precision_bits: u32,
    /// Every hit step, ascending.
    pub hit_ks: Vec<u64>,
    /// Detailed records for the first [`HIT_DETAIL_CAP`] hits.
    pub hits: Vec<OrbitHit>,
}

/// Scans `k = 1..=k_max` for steps where every coordinate `{k·α_i}` lies
/// strictly below `eps`. Classification uses certified dyadic sums; if an
/// enclosure straddles the threshold or an integer, the whole scan restarts
/// at doubled precision (enclosure state cannot be refined mid-run), and a
/// capacity error is returned if that happens [`ESCALATION_LIMIT`] times.
pub fn near_return_search(alphas: &[LogRatio], eps: &Rational, k_max: u64) -> Result<OrbitReport> {
    if alphas.is_empty() {
        return Err(Error::Domain("near-return scan needs at least one ratio".into()));
    }
    if !(eps > &int(0) && eps < &int(1)) {
        return Err(Error::Domain("near-return threshold must lie in (0, 1)".into()));
    }
    let mut bits = alphas
        .iter()
        .map(LogRatio::precision_bits)
        .max()
        .unwrap()
        .max(64);
    for _ in 0..ESCALATION_LIMIT {
        match scan_at_precision(alphas, eps, k_max, bits)? {
            Some(report) => return Ok(report),
            None => bits *= 2,
        }
    }
    Err(Error::Capacity(format!(
        "near-return scan still unclassifiable at {bits} bits"
    )))
}

/// One full scan at fixed precision; `None` means some step was
/// unclassifiable and the caller should escalate.
fn scan_at_precision(
    alphas: &[LogRatio],
    eps: &Rational,
    k_max: u64,
    bits: u32,
) -> Result<Option<OrbitReport>> {
    let refined: Vec<LogRatio> = alphas
        .iter()
        .map(|a| {
            if a.precision_bits() >= bits {
                Ok(a.clone())
            } else {
                a.refine(bits)
            }
        })
        .collect::<Result<_>>()?;
    let shift = bits;
    let mask = (BigUint::one() << shift) - BigUint::one();
    let steps: Vec<(BigUint, BigUint)> =
        refined.iter().map(|a| a.dyadic_bounds(shift)).collect();
    // eps·2^shift rounded both ways: hi_frac < eps_floor certifies "below",
    // lo_frac >= eps_ceil certifies "at or above".
    let scaled = eps * Rational::from_integer(BigInt::one() << shift);
    let eps_floor = scaled.floor().to_integer().to_biguint().expect("eps > 0");
    let eps_ceil = scaled.ceil().to_integer().to_biguint().expect("eps > 0");

    let mut lo_sums: Vec<BigUint> = vec![BigUint::zero(); steps.len()];
    let mut hi_sums: Vec<BigUint> = vec![BigUint::zero(); steps.len()];
    let mut hit_ks = Vec::new();
    let mut hits = Vec::new();
    for k in 1..=k_max {
        let mut all_below = true;
        let mut any_at_or_above = false;
        let mut unclassified = false;
        for i in 0..steps.len() {
            lo_sums[i] += &steps[i].0;
            hi_sums[i] += &steps[i].1;
            let floor_lo = &lo_sums[i] >> shift;
            let floor_hi = &hi_sums[i] >> shift;
            if floor_lo != floor_hi {
                // Enclosure straddles an integer: fractional part unknown.
                all_below = false;
                unclassified = true;
                continue;
            }
            let frac_lo = &lo_sums[i] & &mask;
            let frac_hi = &hi_sums[i] & &mask;
            if frac_hi < eps_floor {
                // certainly below
            } else if frac_lo >= eps_ceil {
                any_at_or_above = true;
                all_below = false;
            } else {
                all_below = false;
                unclassified = true;
            }
        }
        if all_below {
            hit_ks.push(k);
            if hits.len() < HIT_DETAIL_CAP {
                let den = Rational::from_integer(BigInt::one() << shift);
                let point: Vec<(Rational, Rational)> = (0..steps.len())
                    .map(|i| {
                        (
                            Rational::from_integer(BigInt::from(&lo_sums[i] & &mask)) / &den,
                            Rational::from_integer(BigInt::from(&hi_sums[i] & &mask)) / &den,
                        )
                    })
                    .collect();
                let error_bound = point
                    .iter()
                    .map(|(lo, hi)| hi - lo)
                    .max()
                    .unwrap_or_else(|| int(0));
                hits.push(OrbitHit {
                    k,
                    point,
                    error_bound,
                    mapped: None,
                });
            }
        } else if unclassified && !any_at_or_above {
            // No coordinate certainly disqualifies the step, and at least
            // one is unreadable at this precision.
            return Ok(None);
        }
    }
    Ok(Some(OrbitReport {
        k_max,
        precision_bits: bits,
        hit_ks,
        hits,
    }))
}

/// Float mirror of a huge power, kept as `m · 2^e` with `m` in `[1, 2)`.
/// Relative drift is one ulp per multiplication, far below the margins the
/// pre-screen uses.
#[derive(Clone, Copy, Debug)]
struct FloatRep {
    m: f64,
    e: i64,
}

impl FloatRep {
    fn one() -> Self {
        FloatRep { m: 1.0, e: 0 }
    }

    fn mul_small(&mut self, f: u32) {
        self.m *= f64::from(f);
        while self.m >= 2.0 {
            self.m *= 0.5;
            self.e += 1;
        }
    }

    /// Ratio self/other as f64; exponent gaps here never exceed a few bits.
    fn ratio_to(&self, other: &FloatRep) -> f64 {
        (self.m / other.m) * (self.e - other.e).to_f64().map_or(f64::NAN, f64::exp2)
    }
}

/// Exact state of the orbit `k ↦ (4^(f4+1)/3^k, 5^(f5+1)/3^k)` where
/// `f4 = floor(k·log3/log4)` and `f5 = floor(k·log3/log5)`.
///
/// Writing `u = {k·log3/log4}`, the first coordinate equals `4^(1-u)`, so
/// membership of the mapped orbit point in a region bounded by rational
/// inequalities reduces to exact big-integer comparisons against `3^k`.
/// Floor increments are decided by comparing `3^(k+1)` with the pending
/// power (never equal, by unique factorization), so no log precision is
/// involved anywhere.
#[derive(Clone, Debug)]
pub struct PowerOrbit {
    k: u64,
    p3: BigUint,
    p4: BigUint,
    p5: BigUint,
    f4: u64,
    f5: u64,
    m3: FloatRep,
    m4: FloatRep,
    m5: FloatRep,
}

impl PowerOrbit {
    /// State at `k = 1`: `3^1 = 3`, `f4 = 0`, `f5 = 0`.
    pub fn new() -> Self {
        PowerOrbit {
            k: 1,
            p3: BigUint::from(3u32),
            p4: BigUint::from(4u32),
            p5: BigUint::from(5u32),
            f4: 0,
            f5: 0,
            m3: {
                let mut f = FloatRep::one();
                f.mul_small(3);
                f
            },
            m4: {
                let mut f = FloatRep::one();
                f.mul_small(4);
                f
            },
            m5: {
                let mut f = FloatRep::one();
                f.mul_small(5);
                f
            },
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn advance(&mut self) {
        self.p3 *= 3u32;
        self.m3.mul_small(3);
        self.k += 1;
        // f4(k) grows by one exactly when 3^k overtakes 4^(f4+1).
        if self.p3 > self.p4 {
            self.p4 <<= 2;
            self.m4.mul_small(4);
            self.f4 += 1;
        }
        if self.p3 > self.p5 {
            self.p5 *= 5u32;
            self.m5.mul_small(5);
            self.f5 += 1;
        }
        debug_assert!(self.p4 > self.p3 && self.p5 > self.p3);
    }

    /// Exact mapped coordinates `(4^(f4+1)/3^k, 5^(f5+1)/3^k)`.
    pub fn exact_point(&self) -> (Rational, Rational) {
        let d = BigInt::from(self.p3.clone());
        (
            Rational::new(BigInt::from(self.p4.clone()), d.clone()),
            Rational::new(BigInt::from(self.p5.clone()), d),
        )
    }

    /// Approximate mapped coordinates from the float mirrors.
    pub fn float_point(&self) -> (f64, f64) {
        (self.m4.ratio_to(&self.m3), self.m5.ratio_to(&self.m3))
    }

    /// Fractional parts `({k·log3/log4}, {k·log3/log5})` from the float
    /// mirrors; display quality only.
    pub fn float_fracs(&self) -> (f64, f64) {
        let (k1, k2) = self.float_point();
        (1.0 - k1.log2() / 2.0, 1.0 - k2.ln() / 5f64.ln())
    }

    /// Exact region membership: evaluates the linear pre-image constraints
    /// with integer arithmetic. `coeffs` rows are `(c3, c4, c5, strict)`
    /// meaning `c3·3^k + c4·4^(f4+1) + c5·5^(f5+1) >= 0` (or `> 0`).
    fn satisfies_exact(&self, coeffs: &[(i64, i64, i64)]) -> bool {
        coeffs.iter().all(|&(c3, c4, c5)| {
            let mut acc = BigInt::from(self.p3.clone()) * c3;
            acc += BigInt::from(self.p4.clone()) * c4;
            acc += BigInt::from(self.p5.clone()) * c5;
            !acc.is_negative()
        })
    }

    /// True exactly when the mapped point satisfies every region
    /// constraint. Floats pre-screen each row (dividing through by the
    /// positive `3^k` keeps magnitudes near 1); any row inside the safety
    /// margin is re-decided with exact integers, so drift cannot flip a
    /// verdict.
    pub fn in_region(&self, rows: &[(i64, i64, i64)]) -> bool {
        let k1 = self.m4.ratio_to(&self.m3);
        let k2 = self.m5.ratio_to(&self.m3);
        for &(c3, c4, c5) in rows {
            let (t3, t4, t5) = (c3 as f64, c4 as f64 * k1, c5 as f64 * k2);
            let v = t3 + t4 + t5;
            let mag = t3.abs() + t4.abs() + t5.abs();
            if v > mag * 1e-9 {
                continue;
            }
            if v < -mag * 1e-9 {
                return false;
            }
            if !self.satisfies_exact(&[(c3, c4, c5)]) {
                return false;
            }
        }
        true
    }
}

impl Default for PowerOrbit {
    fn default() -> Self {
        Self::new()
    }
}

/// The region constraints in pre-image form. With `k1 = 4^(f4+1)/3^k` and
/// `k2 = 5^(f5+1)/3^k`, each row `(c3, c4, c5)` asserts
/// `c3 + c4·k1 + c5·k2 >= 0` after clearing the positive denominator `3^k`:
///
/// - projection bounds: `1/2 + k1/3 - k2/5 >= 0` and `1/3 + k1/4 - k2/4 <= 0`
/// - scale windows from the hull/gap comparison: `k1 in [2/3, 4]`,
///   `k2 in [10/9, 50/9]`, `k1/k2 in [9/25, 6/5]`
/// - admissible multiplier window: `k1 in [1, 4]`, `k2 in [1, 5]`
pub const REGION_ROWS: [(i64, i64, i64); 11] = [
    (-4, -3, 3),   // 1/3 + k1/4 - k2/4 <= 0, times -12 (sharpest filter first)
    (15, 10, -6),  // 1/2 + k1/3 - k2/5 >= 0, times 30
    (-2, 3, 0),    // k1 >= 2/3
    (4, -1, 0),    // k1 <= 4
    (-10, 0, 9),   // k2 >= 10/9
    (50, 0, -9),   // k2 <= 50/9
    (0, 25, -9),   // k1/k2 >= 9/25 (k2 > 0)
    (0, -5, 6),    // k1/k2 <= 6/5
    (-1, 1, 0),    // k1 >= 1
    (-1, 0, 1),    // k2 >= 1
    (5, 0, -1),    // k2 <= 5
];

/// Scans `k = 1..=k_max` for steps whose mapped point lies in the region
/// cut out by [`REGION_ROWS`]. Verdicts are exact; the float mirrors only
/// skip clearly-outside steps. Reported coordinate enclosures come from
/// the mirrors, padded far beyond their worst-case drift, and the first
/// few hits carry the exact mapped rationals.
pub fn region_hits(k_max: u64) -> Result<OrbitReport> {
    if k_max == 0 {
        return Err(Error::Domain("region scan needs k_max >= 1".into()));
    }
    // Mirror drift grows linearly in k; past this the 1e-9 pre-screen
    // margin would thin out.
    if k_max > 5_000_000 {
        return Err(Error::Capacity(format!(
            "region scan capped at k_max = 5000000, got {k_max}"
        )));
    }
    let mut orbit = PowerOrbit::new();
    let mut hit_ks = Vec::new();
    let mut hits = Vec::new();
    // Display padding dominating float drift (about 1e-11 at k = 10^6).
    let pad = Rational::new(BigInt::one(), BigInt::from(1_000_000_000i64));
    loop {
        if orbit.in_region(&REGION_ROWS) {
            let k = orbit.k();
            hit_ks.push(k);
            if hits.len() < HIT_DETAIL_CAP {
                let (u, v) = orbit.float_fracs();
                let point = vec![frac_enclosure(u, &pad), frac_enclosure(v, &pad)];
                let mapped = if hits.len() < MAPPED_DETAIL_CAP {
                    Some(orbit.exact_point())
                } else {
                    None
                };
                hits.push(OrbitHit {
                    k,
                    point,
                    error_bound: &pad + &pad,
                    mapped,
                });
            }
        }
        if orbit.k() == k_max {
            break;
        }
        orbit.advance();
    }
    Ok(OrbitReport {
        k_max,
        precision_bits: 53,
        hit_ks,
        hits,
    })
}

/// Region test applied to the orbit points of [`orbit_search`].
#[derive(Clone, Debug)]
pub enum OrbitPredicate {
    /// Every fractional part strictly below `eps`.
    NearReturn { eps: Rational },
    /// The mapped point `(4^(1-x), 5^(1-y))` lies in the region cut out
    /// by [`REGION_ROWS`]. Requires the two-ratio orbit of
    /// `(log3/log4, log3/log5)`.
    LeadingDigitRegion,
}

/// Uniform front end over the two scanning engines: box near-returns for
/// arbitrary ratio lists, and the exact region engine for the
/// leading-digit orbit.
pub fn orbit_search(
    alphas: &[LogRatio],
    predicate: &OrbitPredicate,
    k_max: u64,
) -> Result<OrbitReport> {
    match predicate {
        OrbitPredicate::NearReturn { eps } => near_return_search(alphas, eps, k_max),
        OrbitPredicate::LeadingDigitRegion => {
            let bases: Vec<(u64, u64)> = alphas
                .iter()
                .map(|a| (a.num_base(), a.den_base()))
                .collect();
            if bases != [(3, 4), (3, 5)] {
                return Err(Error::Domain(
                    "the region predicate is defined for the (log3/log4, log3/log5) orbit".into(),
                ));
            }
            region_hits(k_max)
        }
    }
}

fn frac_enclosure(x: f64, pad: &Rational) -> (Rational, Rational) {
    let approx = float_to_rational(x);
    ((&approx - pad).max(int(0)), (approx + pad).min(int(1)))
}

fn float_to_rational(x: f64) -> Rational {
    // Clamp display values into [0, 1]; callers only pass fractional parts.
    let clamped = x.clamp(0.0, 1.0);
    let scaled = (clamped * 9_007_199_254_740_992.0) as i64; // 2^53
    reduced_ratio_u128(scaled.unsigned_abs() as u128, 1u128 << 53)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::logr::log_ratio;
    use crate::rational::ratio;

    #[test]
    fn orbit_search_dispatches_both_predicates() {
        let a34 = log_ratio(3, 4, 64).unwrap();
        let a35 = log_ratio(3, 5, 64).unwrap();
        let via_front = orbit_search(
            &[a34.clone(), a35.clone()],
            &OrbitPredicate::LeadingDigitRegion,
            2_000,
        )
        .unwrap();
        assert_eq!(via_front.hit_ks, region_hits(2_000).unwrap().hit_ks);
        // Wrong ratio list for the region predicate.
        assert!(orbit_search(&[a34.clone()], &OrbitPredicate::LeadingDigitRegion, 10).is_err());
        // Rational angle: {k·1} = 0 for every k, below any threshold.
        let one = log_ratio(4, 4, 64).unwrap();
        let trivial = orbit_search(
            &[one],
            &OrbitPredicate::NearReturn { eps: ratio(1, 100) },
            25,
        )
        .unwrap();
        assert_eq!(trivial.hit_ks, (1..=25).collect::<Vec<u64>>());
    }

    #[test]
    fn near_returns_for_log10_over_log11() {
        let alpha = log_ratio(10, 11, 96).unwrap();
        let report = near_return_search(&[alpha], &ratio(1, 100), 500).unwrap();
        assert!(report.hit_ks.contains(&25));
        assert!(report.hit_ks.contains(&478));
        // Every reported hit must also pass a plain float check.
        let a = 10f64.ln() / 11f64.ln();
        for &k in &report.hit_ks {
            let frac = (k as f64 * a).fract();
            assert!(frac < 0.0101, "k = {k} frac = {frac}");
        }
        // And no hit may be missed: check against a float scan away from
        // the decision boundary.
        for k in 1..=500u64 {
            let frac = (k as f64 * a).fract();
            if frac < 0.0099 {
                assert!(report.hit_ks.contains(&k), "missed k = {k}");
            }
        }
        for hit in &report.hits {
            assert!(hit.error_bound < ratio(1, 1_000_000));
            assert_eq!(hit.point.len(), 1);
        }
    }

    #[test]
    fn near_return_rejects_bad_thresholds() {
        let alpha = log_ratio(10, 11, 64).unwrap();
        assert!(near_return_search(&[alpha.clone()], &ratio(0, 1), 10).is_err());
        assert!(near_return_search(&[alpha], &ratio(3, 2), 10).is_err());
        assert!(near_return_search(&[], &ratio(1, 100), 10).is_err());
    }

    #[test]
    fn two_coordinate_near_returns() {
        let a34 = log_ratio(3, 4, 96).unwrap();
        let a35 = log_ratio(3, 5, 96).unwrap();
        let report = near_return_search(&[a34, a35], &ratio(1, 4), 300).unwrap();
        let f34 = 3f64.ln() / 4f64.ln();
        let f35 = 3f64.ln() / 5f64.ln();
        for &k in &report.hit_ks {
            assert!((k as f64 * f34).fract() < 0.2501);
            assert!((k as f64 * f35).fract() < 0.2501);
        }
        assert!(!report.hit_ks.is_empty());
    }

    #[test]
    fn power_orbit_tracks_floors_exactly() {
        let mut orbit = PowerOrbit::new();
        let alpha4 = 3f64.ln() / 4f64.ln();
        let alpha5 = 3f64.ln() / 5f64.ln();
        for _ in 1..200 {
            orbit.advance();
            let k = orbit.k() as f64;
            // Far from any integer boundary at these sizes, float floors
            // are reliable cross-checks.
            assert_eq!(orbit.f4, (k * alpha4).floor() as u64, "k = {k}");
            assert_eq!(orbit.f5, (k * alpha5).floor() as u64, "k = {k}");
        }
    }

    #[test]
    fn power_orbit_exact_point_stays_in_window() {
        let mut orbit = PowerOrbit::new();
        for _ in 1..100 {
            let (k1, k2) = orbit.exact_point();
            assert!(k1 > ratio(1, 1) && k1 <= ratio(4, 1));
            assert!(k2 > ratio(1, 1) && k2 <= ratio(5, 1));
            orbit.advance();
        }
    }

    #[test]
    fn float_mirror_stays_close_to_exact() {
        let mut orbit = PowerOrbit::new();
        for _ in 1..400 {
            orbit.advance();
            let (k1, k2) = orbit.exact_point();
            let (f1, f2) = orbit.float_point();
            let e1 = (crate::rational::to_f64(&k1) - f1).abs();
            let e2 = (crate::rational::to_f64(&k2) - f2).abs();
            assert!(e1 < 1e-10 && e2 < 1e-10, "k = {}", orbit.k());
        }
    }

    #[test]
    fn region_hits_match_exact_recheck() {
        let report = region_hits(2_000).unwrap();
        assert!(!report.hit_ks.is_empty());
        // Re-derive the verdict for every k with pure big-integer rows.
        let mut orbit = PowerOrbit::new();
        let mut expected = Vec::new();
        loop {
            if orbit.satisfies_exact(&REGION_ROWS) {
                expected.push(orbit.k());
            }
            if orbit.k() == 2_000 {
                break;
            }
            orbit.advance();
        }
        assert_eq!(report.hit_ks, expected);
        for (i, hit) in report.hits.iter().enumerate() {
            assert_eq!(hit.mapped.is_some(), i < MAPPED_DETAIL_CAP, "hit {i}");
        }
    }

    #[test]
    fn region_hit_points_satisfy_constraints_exactly() {
        let report = region_hits(500).unwrap();
        for hit in report.hits.iter().take(5) {
            let (k1, k2) = hit.mapped.clone().expect("early hits carry exact points");
            assert!(ratio(1, 2) + &k1 / ratio(3, 1) - &k2 / ratio(5, 1) >= ratio(0, 1));
            assert!(ratio(1, 3) + &k1 / ratio(4, 1) - &k2 / ratio(4, 1) <= ratio(0, 1));
            assert!(k1 >= ratio(1, 1) && k1 <= ratio(4, 1));
            assert!(k2 >= ratio(10, 9) && k2 <= ratio(5, 1));
            assert!(&k1 / &k2 >= ratio(9, 25) && &k1 / &k2 <= ratio(6, 5));
        }
    }
}
